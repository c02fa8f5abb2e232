// Plain-text dataset directory: edges.csv, features.csv, labels.csv,
// split.json. Loading validates everything and reports the offending file
// and line; saving re-emits the canonical form byte-for-byte reproducibly.

#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spgat/graph.hpp"
#include "spgat/matrix.hpp"

namespace spgat {

class DatasetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Dataset {
  Graph graph;
  Matrix features;
  LabeledSplit split;
};

namespace detail {

inline std::string loc(const std::filesystem::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line);
}

inline std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DatasetError("missing file: " + file.string());
  std::vector<std::string> lines;
  std::string s;
  while (std::getline(in, s)) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    lines.push_back(s);
  }
  return lines;
}

inline long parse_int(const std::string& tok, const std::filesystem::path& file,
                      std::size_t line) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw DatasetError("bad integer '" + tok + "' at " + loc(file, line));
  return v;
}

inline double parse_double(const std::string& tok, const std::filesystem::path& file,
                           std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DatasetError("bad number '" + tok + "' at " + loc(file, line));
  }
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream ss(line);
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

// Shortest representation that round-trips through a double.
inline std::string format_double(double v) {
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::stod(buf) == v) return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline Dataset load_dataset(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path features_file = dir / "features.csv";
  const fs::path edges_file = dir / "edges.csv";
  const fs::path labels_file = dir / "labels.csv";
  const fs::path split_file = dir / "split.json";

  // features define n and p
  auto feat_lines = detail::read_lines(features_file);
  while (!feat_lines.empty() && feat_lines.back().empty()) feat_lines.pop_back();
  if (feat_lines.empty()) throw DatasetError("empty file: " + features_file.string());
  const std::size_t n = feat_lines.size();
  const std::size_t p = detail::split_csv(feat_lines[0]).size();
  Matrix features(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    auto toks = detail::split_csv(feat_lines[i]);
    if (toks.size() != p)
      throw DatasetError("ragged row: expected " + std::to_string(p) + " values, got " +
                         std::to_string(toks.size()) + " at " +
                         detail::loc(features_file, i + 1));
    for (std::size_t j = 0; j < p; ++j) {
      features(i, j) = detail::parse_double(toks[j], features_file, i + 1);
      if (!std::isfinite(features(i, j)))
        throw DatasetError("non-finite feature at " + detail::loc(features_file, i + 1));
    }
  }

  auto edge_lines = detail::read_lines(edges_file);
  std::vector<Edge> edges;
  for (std::size_t ln = 0; ln < edge_lines.size(); ++ln) {
    if (edge_lines[ln].empty()) continue;
    auto toks = detail::split_csv(edge_lines[ln]);
    if (toks.size() != 2)
      throw DatasetError("expected two columns at " + detail::loc(edges_file, ln + 1));
    const long a = detail::parse_int(toks[0], edges_file, ln + 1);
    const long b = detail::parse_int(toks[1], edges_file, ln + 1);
    if (a < 0 || b < 0 || a >= static_cast<long>(n) || b >= static_cast<long>(n))
      throw DatasetError("node index out of range [0, " + std::to_string(n) + ") at " +
                         detail::loc(edges_file, ln + 1));
    if (a == b)
      throw DatasetError("self loop at " + detail::loc(edges_file, ln + 1));
    edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  }

  auto label_lines = detail::read_lines(labels_file);
  while (!label_lines.empty() && label_lines.back().empty()) label_lines.pop_back();
  if (label_lines.size() != n)
    throw DatasetError("labels.csv has " + std::to_string(label_lines.size()) +
                       " rows but features.csv has " + std::to_string(n) + ": " +
                       labels_file.string());
  LabeledSplit split;
  split.labels.resize(n);
  int max_label = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const long v = detail::parse_int(label_lines[i], labels_file, i + 1);
    if (v < 0) throw DatasetError("negative label at " + detail::loc(labels_file, i + 1));
    split.labels[i] = static_cast<int>(v);
    max_label = std::max(max_label, static_cast<int>(v));
  }
  split.num_classes = max_label + 1;

  std::ifstream sin(split_file, std::ios::binary);
  if (!sin) throw DatasetError("missing file: " + split_file.string());
  nlohmann::json js;
  try {
    sin >> js;
  } catch (const std::exception& e) {
    throw DatasetError("bad JSON in " + split_file.string() + ": " + e.what());
  }
  auto read_set = [&](const char* key) {
    if (!js.contains(key))
      throw DatasetError("missing key '" + std::string(key) + "' in " + split_file.string());
    std::vector<std::uint32_t> out;
    for (const auto& v : js[key]) {
      const long idx = v.get<long>();
      if (idx < 0 || idx >= static_cast<long>(n))
        throw DatasetError("split index " + std::to_string(idx) + " out of range in " +
                           split_file.string());
      out.push_back(static_cast<std::uint32_t>(idx));
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
      throw DatasetError("duplicate index in '" + std::string(key) + "' of " +
                         split_file.string());
    return out;
  };
  split.train = read_set("train");
  split.val = read_set("val");
  split.test = read_set("test");

  std::set<std::uint32_t> seen(split.train.begin(), split.train.end());
  for (auto i : split.val)
    if (!seen.insert(i).second)
      throw DatasetError("splits not disjoint: node " + std::to_string(i) + " in " +
                         split_file.string());
  for (auto i : split.test)
    if (!seen.insert(i).second)
      throw DatasetError("splits not disjoint: node " + std::to_string(i) + " in " +
                         split_file.string());

  Dataset ds;
  try {
    ds.graph = make_graph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw DatasetError(std::string(e.what()) + " in " + edges_file.string());
  }
  ds.features = std::move(features);
  ds.split = std::move(split);
  return ds;
}

inline void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  std::ofstream ef(dir / "edges.csv", std::ios::binary);
  for (const auto& [i, j] : ds.graph.edges) ef << i << "," << j << "\n";

  std::ofstream ff(dir / "features.csv", std::ios::binary);
  for (std::size_t i = 0; i < ds.features.rows(); ++i) {
    for (std::size_t j = 0; j < ds.features.cols(); ++j) {
      if (j) ff << ",";
      ff << detail::format_double(ds.features(i, j));
    }
    ff << "\n";
  }

  std::ofstream lf(dir / "labels.csv", std::ios::binary);
  for (int lab : ds.split.labels) lf << lab << "\n";

  auto dump_set = [](std::ostream& os, const std::vector<std::uint32_t>& v) {
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
  };
  std::ofstream sf(dir / "split.json", std::ios::binary);
  sf << "{\"train\":";
  dump_set(sf, ds.split.train);
  sf << ",\"val\":";
  dump_set(sf, ds.split.val);
  sf << ",\"test\":";
  dump_set(sf, ds.split.test);
  sf << "}\n";
}

}  // namespace spgat
