// On-disk cache for wavelet operator pairs. One matrix per container:
//
//   header, 16 bytes: magic "SPWV" | u32 version | u32 n | u32 nnz
//   row_ptr: (n+1) x i64 little-endian
//   col_idx: nnz x i64 little-endian
//   values:  nnz x f32 little-endian
//
// The cache key hashes the graph's canonical edge list together with
// (s, t, provenance, M).

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "spgat/graph.hpp"
#include "spgat/matrix.hpp"
#include "spgat/wavelets.hpp"

namespace spgat {

class CacheError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

constexpr std::array<char, 4> kCacheMagic = {'S', 'P', 'W', 'V'};
constexpr std::uint32_t kCacheVersion = 1;

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// The header's n field is the row count; readers of rectangular payloads
// (checkpoint weights) restore the column count from their own manifest.
inline void write_csr_container(const std::filesystem::path& path, const CsrMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CacheError("cannot open for writing: " + path.string());
  std::string bytes;
  bytes.append(detail::kCacheMagic.data(), 4);
  detail::put_u32(bytes, detail::kCacheVersion);
  detail::put_u32(bytes, static_cast<std::uint32_t>(m.rows));
  detail::put_u32(bytes, static_cast<std::uint32_t>(m.nnz()));
  for (std::int64_t v : m.row_ptr) detail::put_u64(bytes, static_cast<std::uint64_t>(v));
  for (std::int64_t v : m.col_idx) detail::put_u64(bytes, static_cast<std::uint64_t>(v));
  for (double v : m.values) {
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    detail::put_u32(bytes, bits);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CacheError("write failed: " + path.string());
}

inline CsrMatrix read_csr_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16) throw CacheError("truncated header: " + path.string());
  if (std::memcmp(bytes.data(), detail::kCacheMagic.data(), 4) != 0)
    throw CacheError("bad magic: " + path.string());
  auto get_u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + i]);
    return v;
  };
  auto get_u64 = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + i]);
    return v;
  };
  const std::uint32_t version = get_u32(4);
  if (version != detail::kCacheVersion)
    throw CacheError("unsupported version " + std::to_string(version) + ": " + path.string());
  const std::size_t n = get_u32(8);
  const std::size_t nnz = get_u32(12);
  const std::size_t need = 16 + 8 * (n + 1) + 8 * nnz + 4 * nnz;
  if (bytes.size() != need)
    throw CacheError("size mismatch (" + std::to_string(bytes.size()) + " vs expected " +
                     std::to_string(need) + "): " + path.string());
  CsrMatrix m;
  m.rows = m.cols = n;
  std::size_t off = 16;
  m.row_ptr.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i, off += 8)
    m.row_ptr[i] = static_cast<std::int64_t>(get_u64(off));
  m.col_idx.resize(nnz);
  for (std::size_t i = 0; i < nnz; ++i, off += 8)
    m.col_idx[i] = static_cast<std::int64_t>(get_u64(off));
  m.values.resize(nnz);
  for (std::size_t i = 0; i < nnz; ++i, off += 4) {
    const std::uint32_t bits = get_u32(off);
    float f;
    std::memcpy(&f, &bits, 4);
    m.values[i] = static_cast<double>(f);
  }
  return m;
}

inline std::uint64_t wavelet_cache_key(const Graph& g, double s, double t,
                                       Provenance provenance, int cheby_order) {
  std::string bytes;
  detail::put_u64(bytes, static_cast<std::uint64_t>(g.n));
  for (const auto& [i, j] : g.edges) {
    detail::put_u32(bytes, i);
    detail::put_u32(bytes, j);
  }
  std::uint64_t sb, tb;
  std::memcpy(&sb, &s, 8);
  std::memcpy(&tb, &t, 8);
  detail::put_u64(bytes, sb);
  detail::put_u64(bytes, tb);
  bytes.push_back(provenance == Provenance::exact ? 'E' : 'C');
  detail::put_u32(bytes, static_cast<std::uint32_t>(provenance == Provenance::exact ? 0 : cheby_order));
  return detail::fnv1a64(bytes);
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t key,
                                        const char* which) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(key));
  return dir / (std::string(buf) + "." + which + ".spwv");
}

// Stores psi / psi_inv under the key; returns the key.
inline std::uint64_t cache_store(const std::filesystem::path& dir, const Graph& g,
                                 const WaveletBasis& basis) {
  std::filesystem::create_directories(dir);
  const auto key = wavelet_cache_key(g, basis.scale, basis.threshold, basis.provenance,
                                     basis.cheby_order);
  write_csr_container(cache_file(dir, key, "psi"), csr_from_dense(basis.psi));
  write_csr_container(cache_file(dir, key, "psi_inv"), csr_from_dense(basis.psi_inv));
  return key;
}

// Loads a cached pair if both files exist. The eigensystem is not part of
// the container, so a loaded exact basis cannot be frequency-split.
inline std::optional<std::pair<CsrMatrix, CsrMatrix>> cache_load(
    const std::filesystem::path& dir, std::uint64_t key) {
  const auto psi_path = cache_file(dir, key, "psi");
  const auto inv_path = cache_file(dir, key, "psi_inv");
  if (!std::filesystem::exists(psi_path) || !std::filesystem::exists(inv_path))
    return std::nullopt;
  return std::make_pair(read_csr_container(psi_path), read_csr_container(inv_path));
}

}  // namespace spgat
