// Serialization of experiment reports: full JSON (timings isolated under a
// "timings" key so everything else is reproducible byte-for-byte at a fixed
// seed) and a per-epoch metrics CSV.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "spgat/dataset.hpp"
#include "spgat/model.hpp"
#include "spgat/train.hpp"
#include "spgat/wavelet_cache.hpp"

namespace spgat {

inline nlohmann::json config_to_json(const ModelConfig& cfg) {
  nlohmann::json j;
  j["variant"] = to_string(cfg.variant);
  j["hidden"] = cfg.hidden;
  j["scale"] = cfg.scale;
  j["threshold"] = cfg.threshold;
  j["cheby_order"] = cfg.cheby_order;
  j["d_fraction"] = cfg.d_fraction;
  j["agg"] = to_string(cfg.agg);
  j["dropout"] = cfg.dropout;
  j["weight_decay"] = cfg.weight_decay;
  j["l2_all_layers"] = cfg.l2_all_layers;
  j["learning_rate"] = cfg.learning_rate;
  j["seed"] = cfg.seed;
  j["max_epochs"] = cfg.max_epochs;
  j["patience"] = cfg.patience;
  j["row_normalize"] = cfg.row_normalize;
  j["lambda_max"] = cfg.lambda_max;
  return j;
}

inline nlohmann::json report_to_json(const ExperimentReport& r, bool include_timings = true) {
  nlohmann::json j;
  j["dataset"] = r.dataset_name;
  j["n"] = r.n_nodes;
  j["input_dim"] = r.input_dim;
  j["num_classes"] = r.num_classes;
  j["low_frequency_d"] = r.low_frequency_d;
  j["config"] = config_to_json(r.config);
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : r.epochs)
    epochs.push_back({e.train_loss, e.val_loss, e.val_acc});
  j["epochs"] = std::move(epochs);
  j["best_epoch"] = r.best_epoch;
  j["stopped_epoch"] = r.stopped_epoch;
  j["test_accuracy"] = r.test_accuracy;
  j["attention"] = {{r.attention[0].first, r.attention[0].second},
                    {r.attention[1].first, r.attention[1].second}};
  if (include_timings) {
    j["timings"] = {{"operator_build_s", r.timings.operator_build_s},
                    {"train_s", r.timings.train_s},
                    {"mean_epoch_s", r.timings.mean_epoch_s}};
  }
  return j;
}

inline void write_report_json(const std::filesystem::path& path, const ExperimentReport& r) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << report_to_json(r).dump(2) << "\n";
}

inline void write_epochs_csv(const std::filesystem::path& path, const ExperimentReport& r) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "epoch,train_loss,val_loss,val_acc\n";
  for (std::size_t e = 0; e < r.epochs.size(); ++e)
    out << e << "," << detail::format_double(r.epochs[e].train_loss) << ","
        << detail::format_double(r.epochs[e].val_loss) << ","
        << detail::format_double(r.epochs[e].val_acc) << "\n";
}

inline void write_sweep_csv(const std::filesystem::path& path,
                            const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "fraction,d,mean_acc,std_acc,num_seeds\n";
  for (const auto& row : rows)
    out << detail::format_double(row.fraction) << "," << row.d << ","
        << detail::format_double(row.mean_acc) << "," << detail::format_double(row.std_acc)
        << "," << row.per_seed.size() << "\n";
}

// ---------------------------------------------------------------------------
// Checkpoints: JSON manifest + one binary container per weight matrix
// (attention logits ride in the manifest).
// ---------------------------------------------------------------------------

inline void save_checkpoint(const std::filesystem::path& dir, const SpGATModel& model,
                            int epoch, double test_accuracy) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["config"] = config_to_json(model.config());
  j["epoch"] = epoch;
  j["test_accuracy"] = test_accuracy;
  j["input_dim"] = model.input_dim();
  j["num_classes"] = model.num_classes();
  j["attention_logits"] = {
      {model.layer(0).attn_low, model.layer(0).attn_high},
      {model.layer(1).attn_low, model.layer(1).attn_high}};
  j["weights"] = {{"w1", {{"rows", model.layer(0).weight.rows()},
                          {"cols", model.layer(0).weight.cols()},
                          {"file", "w1.spwv"}}},
                  {"w2", {{"rows", model.layer(1).weight.rows()},
                          {"cols", model.layer(1).weight.cols()},
                          {"file", "w2.spwv"}}}};
  std::ofstream out(dir / "checkpoint.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << "\n";
  write_csr_container(dir / "w1.spwv", csr_from_dense(model.layer(0).weight));
  write_csr_container(dir / "w2.spwv", csr_from_dense(model.layer(1).weight));
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.variant = j.at("variant").get<std::string>() == "exact" ? Variant::exact : Variant::cheby;
  cfg.hidden = j.at("hidden").get<int>();
  cfg.scale = j.at("scale").get<double>();
  cfg.threshold = j.at("threshold").get<double>();
  cfg.cheby_order = j.at("cheby_order").get<int>();
  cfg.d_fraction = j.at("d_fraction").get<double>();
  cfg.agg = j.at("agg").get<std::string>() == "max" ? Aggregator::max : Aggregator::mean;
  cfg.dropout = j.at("dropout").get<double>();
  cfg.weight_decay = j.at("weight_decay").get<double>();
  cfg.l2_all_layers = j.at("l2_all_layers").get<bool>();
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.max_epochs = j.at("max_epochs").get<int>();
  cfg.patience = j.at("patience").get<int>();
  cfg.row_normalize = j.at("row_normalize").get<bool>();
  cfg.lambda_max = j.at("lambda_max").get<double>();
  return cfg;
}

inline SpGATModel load_checkpoint(const std::filesystem::path& dir, const Graph& graph) {
  std::ifstream in(dir / "checkpoint.json", std::ios::binary);
  if (!in) throw CacheError("missing checkpoint manifest in " + dir.string());
  nlohmann::json j;
  in >> j;
  const ModelConfig cfg = config_from_json(j.at("config"));
  const auto input_dim = j.at("input_dim").get<std::size_t>();
  const auto num_classes = j.at("num_classes").get<int>();
  SpGATModel model(cfg, build_branch_operators(cfg, graph), input_dim, num_classes);
  auto load_weight = [&](const char* key, Matrix& w) {
    const auto& meta = j.at("weights").at(key);
    CsrMatrix m = read_csr_container(dir / meta.at("file").get<std::string>());
    m.cols = meta.at("cols").get<std::size_t>();  // container header carries rows only
    Matrix dense = csr_to_dense(m);
    if (dense.rows() != w.rows() || dense.cols() != w.cols())
      throw CacheError("checkpoint weight shape mismatch for " + std::string(key));
    w = std::move(dense);
  };
  load_weight("w1", model.layer(0).weight);
  load_weight("w2", model.layer(1).weight);
  const auto& al = j.at("attention_logits");
  model.layer(0).attn_low = al[0][0].get<double>();
  model.layer(0).attn_high = al[0][1].get<double>();
  model.layer(1).attn_low = al[1][0].get<double>();
  model.layer(1).attn_high = al[1][1].get<double>();
  return model;
}

}  // namespace spgat
