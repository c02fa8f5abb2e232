// spgat: command-line front end. Subcommands cover training and evaluation,
// the d sweep, the wavelet-construction benchmark, attention and knockout
// reports, the barbell band demo, synthetic dataset generation and the
// wavelet cache. stdout carries the final machine-parseable result lines;
// everything else goes to stderr. Exit codes: 0 ok, 1 configuration or
// input error, 2 runtime failure.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spgat/dataset.hpp"
#include "spgat/graph.hpp"
#include "spgat/model.hpp"
#include "spgat/report_io.hpp"
#include "spgat/train.hpp"
#include "spgat/wavelet_cache.hpp"
#include "spgat/wavelets.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) { return spgat::detail::format_double(v); }

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::string tok;
  std::istringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoull(tok));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (auto v : parse_u64_list(s)) out.push_back(static_cast<std::size_t>(v));
  return out;
}

// Options shared by every command that trains or builds operators.
struct RunConfig {
  std::string dataset;
  std::string out_dir = "runs";
  std::string variant = "exact";
  int hidden = 64;
  double s = 1.0;
  double t = 1e-4;
  int cheby_order = 1;
  double d_frac = 0.05;
  std::string agg = "max";
  double dropout = 0.5;
  double weight_decay = 5e-4;
  bool l2_all_layers = false;
  double lr = 0.01;
  std::uint64_t seed = 0;
  std::string seeds;  // comma list; overrides --seed when given
  int jobs = 1;
  int max_epochs = 500;
  int patience = 100;
  bool row_normalize = true;
  double lambda_max = 2.0;
  std::string config_file;

  bool s_explicit = false;  // s differs by variant unless pinned by user/config

  spgat::ModelConfig to_model_config() const {
    spgat::ModelConfig cfg;
    if (variant != "exact" && variant != "cheby")
      throw std::invalid_argument("unknown variant '" + variant + "'");
    cfg.variant = variant == "exact" ? spgat::Variant::exact : spgat::Variant::cheby;
    cfg.hidden = hidden;
    cfg.scale = (!s_explicit && cfg.variant == spgat::Variant::cheby) ? 2.0 : s;
    cfg.threshold = t;
    cfg.cheby_order = cheby_order;
    cfg.d_fraction = d_frac;
    if (agg != "max" && agg != "mean")
      throw std::invalid_argument("unknown aggregator '" + agg + "'");
    cfg.agg = agg == "max" ? spgat::Aggregator::max : spgat::Aggregator::mean;
    cfg.dropout = dropout;
    cfg.weight_decay = weight_decay;
    cfg.l2_all_layers = l2_all_layers;
    cfg.learning_rate = lr;
    cfg.seed = seed;
    cfg.max_epochs = max_epochs;
    cfg.patience = patience;
    cfg.row_normalize = row_normalize;
    cfg.lambda_max = lambda_max;
    cfg.validate();
    return cfg;
  }

  std::vector<std::uint64_t> seed_list() const {
    if (!seeds.empty()) return parse_u64_list(seeds);
    return {seed};
  }
};

void add_model_flags(CLI::App* cmd, RunConfig& rc, bool needs_dataset = true) {
  if (needs_dataset)
    cmd->add_option("--dataset", rc.dataset, "Dataset directory (edges/features/labels/split)")
        ->required();
  cmd->add_option("--out", rc.out_dir, "Output directory for reports and CSVs");
  cmd->add_option("--variant", rc.variant, "Spectral basis route: exact or cheby");
  cmd->add_option("--hidden", rc.hidden, "Hidden units");
  cmd->add_option("--s", rc.s, "Wavelet scale s (default 1 exact, 2 cheby)");
  cmd->add_option("--t", rc.t, "Sparsification threshold t");
  cmd->add_option("--cheby-order", rc.cheby_order, "Chebyshev order M (cheby variant)");
  cmd->add_option("--d-frac", rc.d_frac, "Low-frequency fraction of n (exact variant)");
  cmd->add_option("--agg", rc.agg, "Branch aggregation: max or mean");
  cmd->add_option("--dropout", rc.dropout, "Dropout rate on layer inputs");
  cmd->add_option("--weight-decay", rc.weight_decay, "L2 strength on first-layer weights");
  cmd->add_flag("--l2-all-layers", rc.l2_all_layers, "Apply L2 to both layers' weights");
  cmd->add_option("--lr", rc.lr, "Adam learning rate");
  cmd->add_option("--seed", rc.seed, "RNG seed");
  cmd->add_option("--seeds", rc.seeds, "Comma-separated seed list (overrides --seed)");
  cmd->add_option("--jobs", rc.jobs, "Worker threads for multi-seed runs");
  cmd->add_option("--max-epochs", rc.max_epochs, "Epoch cap");
  cmd->add_option("--patience", rc.patience, "Early-stopping window");
  cmd->add_flag("--row-normalize,!--no-row-normalize", rc.row_normalize,
                "L1-normalize feature rows (default on)");
  cmd->add_option("--lambda-max", rc.lambda_max, "Spectrum bound for the Chebyshev rescaling");
  cmd->add_option("--config", rc.config_file, "JSON with defaults for these flags (flags win)");
}

// Defaults < config file < explicit flags. The config file is applied before
// parsing, so any flag the user passes overwrites it.
void apply_config_file(CLI::App* cmd, RunConfig& rc, const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CLI::ValidationError("--config", std::string("bad JSON: ") + e.what());
  }
  (void)cmd;
  auto set_d = [&](const char* key, double& ref) { if (j.contains(key)) ref = j[key].get<double>(); };
  auto set_i = [&](const char* key, int& ref) { if (j.contains(key)) ref = j[key].get<int>(); };
  auto set_b = [&](const char* key, bool& ref) { if (j.contains(key)) ref = j[key].get<bool>(); };
  auto set_s = [&](const char* key, std::string& ref) { if (j.contains(key)) ref = j[key].get<std::string>(); };
  set_s("dataset", rc.dataset);
  set_s("out", rc.out_dir);
  set_s("variant", rc.variant);
  set_i("hidden", rc.hidden);
  if (j.contains("s")) { rc.s = j["s"].get<double>(); rc.s_explicit = true; }
  set_d("t", rc.t);
  set_i("cheby-order", rc.cheby_order);
  set_d("d-frac", rc.d_frac);
  set_s("agg", rc.agg);
  set_d("dropout", rc.dropout);
  set_d("weight-decay", rc.weight_decay);
  set_b("l2-all-layers", rc.l2_all_layers);
  set_d("lr", rc.lr);
  if (j.contains("seed")) rc.seed = j["seed"].get<std::uint64_t>();
  set_s("seeds", rc.seeds);
  set_i("jobs", rc.jobs);
  set_i("max-epochs", rc.max_epochs);
  set_i("patience", rc.patience);
  set_b("row-normalize", rc.row_normalize);
  set_d("lambda-max", rc.lambda_max);
}

std::string dataset_name(const std::string& dir) {
  fs::path p(dir);
  auto name = p.filename().string();
  if (name.empty()) name = p.parent_path().filename().string();
  return name.empty() ? "dataset" : name;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_train(const RunConfig& rc, const std::string& save_model,
              const std::string& emit_embeddings) {
  const spgat::Dataset ds = spgat::load_dataset(rc.dataset);
  const std::string name = dataset_name(rc.dataset);
  const auto seeds = rc.seed_list();
  fs::create_directories(rc.out_dir);

  const auto ms = spgat::train_multi_seed(rc.to_model_config(), ds, seeds, rc.jobs, name);
  std::vector<double> accs;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& report = ms.reports[i];
    const std::string stem =
        name + "_" + spgat::to_string(report.config.variant) + "_" + std::to_string(seeds[i]);
    spgat::write_report_json(fs::path(rc.out_dir) / (stem + ".json"), report);
    spgat::write_epochs_csv(fs::path(rc.out_dir) / (stem + "_epochs.csv"), report);
    accs.push_back(report.test_accuracy);
    std::cerr << "seed " << seeds[i] << ": test_acc=" << fmt4(report.test_accuracy)
              << " stopped_epoch=" << report.stopped_epoch << "\n";
    std::cout << "test_acc=" << fmt(report.test_accuracy) << "\n";
  }
  if (seeds.size() > 1)
    std::cout << "test_acc_mean=" << fmt(ms.mean_acc) << " test_acc_std=" << fmt(ms.std_acc)
              << "\n";

  if (!save_model.empty() || !emit_embeddings.empty()) {
    // retrain the first seed; runs are deterministic, so this is the same model
    spgat::ModelConfig cfg = rc.to_model_config();
    cfg.seed = seeds.front();
    spgat::TrainResult res = spgat::train_model(cfg, ds, name);
    if (!save_model.empty())
      spgat::save_checkpoint(save_model, res.model, res.report.stopped_epoch,
                             res.report.test_accuracy);
    if (!emit_embeddings.empty()) {
      spgat::Matrix h1 =
          spgat::layer_forward(res.model.layer(0), res.features, false, nullptr, nullptr);
      std::ofstream out(emit_embeddings, std::ios::binary | std::ios::trunc);
      for (std::size_t r = 0; r < h1.rows(); ++r) {
        for (std::size_t c = 0; c < h1.cols(); ++c) out << (c ? "," : "") << fmt(h1(r, c));
        out << "\n";
      }
    }
  }
  return 0;
}

int cmd_gen_sbm(const std::string& sizes_str, double p_in, double p_out, std::uint64_t seed,
                const std::string& out, std::size_t feat_dim, double feat_noise,
                double feat_signal) {
  const auto sizes = parse_size_list(sizes_str);
  auto [graph, split] = spgat::sbm_graph(sizes, p_in, p_out, seed);
  spgat::Dataset ds;
  ds.features = spgat::sbm_features(split, feat_dim, feat_noise, feat_signal, seed);
  ds.graph = std::move(graph);
  ds.split = std::move(split);
  spgat::save_dataset(ds, out);
  std::cout << "dataset=" << out << " n=" << ds.graph.n << " edges=" << ds.graph.num_edges()
            << "\n";
  return 0;
}

int cmd_sweep_d(const RunConfig& rc, const std::string& fractions_str) {
  const spgat::Dataset ds = spgat::load_dataset(rc.dataset);
  const std::string name = dataset_name(rc.dataset);
  const auto fractions = parse_double_list(fractions_str);
  if (fractions.empty()) throw std::invalid_argument("sweep-d: empty fraction list");
  auto rows = spgat::sweep_d(rc.to_model_config(), ds, fractions, rc.seed_list(), rc.jobs, name);
  fs::create_directories(rc.out_dir);
  const fs::path csv = fs::path(rc.out_dir) / (name + "_sweep_d.csv");
  spgat::write_sweep_csv(csv, rows);
  const auto best = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.mean_acc < b.mean_acc;
  });
  std::cerr << "fraction  d  mean_acc  std_acc\n";
  for (const auto& r : rows)
    std::cerr << fmt4(r.fraction) << "  " << r.d << "  " << fmt4(r.mean_acc) << "  "
              << fmt4(r.std_acc) << "\n";
  std::cout << "sweep_csv=" << csv.string() << " best_fraction=" << fmt(best->fraction)
            << " best_acc=" << fmt(best->mean_acc) << "\n";
  return 0;
}

int cmd_bench(const RunConfig& rc, int runs, int bench_order) {
  const spgat::Dataset ds = spgat::load_dataset(rc.dataset);
  const double s = rc.s_explicit ? rc.s : 1.0;
  auto res = spgat::bench_wavelets(ds.graph, s, rc.t, bench_order, runs);
  fs::create_directories(rc.out_dir);
  const fs::path csv = fs::path(rc.out_dir) / (dataset_name(rc.dataset) + "_bench.csv");
  {
    std::ofstream out(csv, std::ios::binary | std::ios::trunc);
    out << "run,eigen_s,cheby_s\n";
    for (int i = 0; i < runs; ++i)
      out << i << "," << fmt(res.eigen_runs_s[i]) << "," << fmt(res.cheby_runs_s[i]) << "\n";
  }
  std::cerr << "n=" << res.n << " edges=" << res.num_edges << " runs=" << runs
            << " M=" << bench_order << "\n";
  std::cout << "eigen_s=" << fmt(res.eigen_median_s) << " cheby_s=" << fmt(res.cheby_median_s)
            << " speedup=" << fmt(res.speedup) << "\n";
  return 0;
}

int cmd_attention(const RunConfig& rc) {
  const spgat::Dataset ds = spgat::load_dataset(rc.dataset);
  const std::string name = dataset_name(rc.dataset);
  spgat::ModelConfig cfg = rc.to_model_config();
  cfg.seed = rc.seed_list().front();
  auto res = spgat::train_model(cfg, ds, name);
  const auto att = spgat::report_attention(res.model);
  fs::create_directories(rc.out_dir);
  {
    std::ofstream out(fs::path(rc.out_dir) / (name + "_attention.csv"),
                      std::ios::binary | std::ios::trunc);
    out << "layer,alpha_low,alpha_high\n";
    for (int l = 0; l < 2; ++l)
      out << (l + 1) << "," << fmt(att[l].first) << "," << fmt(att[l].second) << "\n";
  }
  std::cout << "alpha1_low=" << fmt(att[0].first) << " alpha1_high=" << fmt(att[0].second)
            << " alpha2_low=" << fmt(att[1].first) << " alpha2_high=" << fmt(att[1].second)
            << "\n";
  return 0;
}

int cmd_knockout(const RunConfig& rc) {
  const spgat::Dataset ds = spgat::load_dataset(rc.dataset);
  const std::string name = dataset_name(rc.dataset);
  const auto seeds = rc.seed_list();
  std::vector<double> full(seeds.size()), low_only(seeds.size()), high_only(seeds.size());
  const int workers = std::max(1, std::min<int>(rc.jobs, static_cast<int>(seeds.size())));
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= seeds.size()) return;
      spgat::ModelConfig cfg = rc.to_model_config();
      cfg.seed = seeds[i];
      auto res = spgat::train_model(cfg, ds, name);
      full[i] = res.report.test_accuracy;
      // knocking out high leaves the low branch, and vice versa
      low_only[i] = spgat::frequency_knockout(res.model, res.features, ds.split.labels,
                                              ds.split.test, spgat::Branch::high);
      high_only[i] = spgat::frequency_knockout(res.model, res.features, ds.split.labels,
                                               ds.split.test, spgat::Branch::low);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  fs::create_directories(rc.out_dir);
  {
    std::ofstream out(fs::path(rc.out_dir) / (name + "_knockout.csv"),
                      std::ios::binary | std::ios::trunc);
    out << "seed,acc_full,acc_low_only,acc_high_only\n";
    for (std::size_t i = 0; i < seeds.size(); ++i)
      out << seeds[i] << "," << fmt(full[i]) << "," << fmt(low_only[i]) << ","
          << fmt(high_only[i]) << "\n";
  }
  std::cout << "acc_full=" << fmt(spgat::mean_of(full))
            << " acc_low_only=" << fmt(spgat::mean_of(low_only))
            << " acc_high_only=" << fmt(spgat::mean_of(high_only)) << "\n";
  return 0;
}

int cmd_demo_barbell(std::size_t k, std::size_t d, const std::string& out_dir) {
  const spgat::Graph g = spgat::barbell_graph(k);
  const auto eig = spgat::eigendecompose(spgat::normalize(g));
  const spgat::Matrix low = spgat::band_reconstruct(eig, d, spgat::BandMode::low);
  const spgat::Matrix high = spgat::band_reconstruct(eig, d, spgat::BandMode::high);
  const spgat::Edge bridge{static_cast<std::uint32_t>(k - 1), static_cast<std::uint32_t>(k)};

  fs::create_directories(out_dir);
  const fs::path csv = fs::path(out_dir) / "barbell_bands.csv";
  std::ofstream out(csv, std::ios::binary | std::ios::trunc);
  out << "i,j,low_weight,high_weight,is_bridge\n";
  double low_intra = 0.0, high_intra = 0.0;
  for (const auto& e : g.edges) {
    const bool is_bridge = e == bridge;
    out << e.first << "," << e.second << "," << fmt(low(e.first, e.second)) << ","
        << fmt(high(e.first, e.second)) << "," << (is_bridge ? 1 : 0) << "\n";
    if (!is_bridge) {
      low_intra += std::fabs(low(e.first, e.second));
      high_intra += std::fabs(high(e.first, e.second));
    }
  }
  const double denom = static_cast<double>(g.num_edges() - 1);
  std::cout << "low_intra=" << fmt(low_intra / denom)
            << " low_bridge=" << fmt(std::fabs(low(bridge.first, bridge.second)))
            << " high_intra=" << fmt(high_intra / denom)
            << " high_bridge=" << fmt(std::fabs(high(bridge.first, bridge.second)))
            << " csv=" << csv.string() << "\n";
  return 0;
}

int cmd_wavelets(const RunConfig& rc, const std::string& cache_dir) {
  const spgat::Dataset ds = spgat::load_dataset(rc.dataset);
  const auto ops = spgat::normalize(ds.graph);
  spgat::WaveletBasis basis;
  if (rc.variant == "exact") {
    const double s = rc.s_explicit ? rc.s : 1.0;
    basis = spgat::heat_wavelets(spgat::eigendecompose(ops), s, rc.t);
  } else if (rc.variant == "cheby") {
    const double s = rc.s_explicit ? rc.s : 2.0;
    basis = spgat::chebyshev_wavelets(ops, s, rc.cheby_order, rc.t);
  } else {
    throw std::invalid_argument("unknown variant '" + rc.variant + "'");
  }
  const auto key = spgat::cache_store(cache_dir, ds.graph, basis);
  char keyhex[17];
  std::snprintf(keyhex, sizeof keyhex, "%016llx", static_cast<unsigned long long>(key));
  std::cout << "cache_key=" << keyhex << " psi_nnz=" << spgat::count_nonzeros(basis.psi)
            << " psi_inv_nnz=" << spgat::count_nonzeros(basis.psi_inv) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral graph attention network with heat-kernel wavelets and a "
               "Chebyshev fast approximation"};
  app.require_subcommand(1);

  RunConfig rc_train, rc_sweep, rc_bench, rc_attn, rc_ko, rc_wav;
  std::string save_model, emit_embeddings;
  auto* train_cmd = app.add_subcommand("train", "Train and evaluate on a dataset");
  add_model_flags(train_cmd, rc_train);
  train_cmd->add_option("--save-model", save_model, "Write a checkpoint of the first seed's model");
  train_cmd->add_option("--emit-embeddings", emit_embeddings,
                        "Write the hidden-layer embeddings of the first seed (CSV)");

  std::string sizes = "50,50";
  double p_in = 0.2, p_out = 0.01;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  std::size_t feat_dim = 8;
  double feat_noise = 0.6, feat_signal = 1.0;
  auto* gen_cmd = app.add_subcommand("gen-sbm", "Generate a stochastic block model dataset");
  gen_cmd->add_option("--sizes", sizes, "Comma-separated block sizes");
  gen_cmd->add_option("--p-in", p_in, "Within-block edge probability");
  gen_cmd->add_option("--p-out", p_out, "Between-block edge probability");
  gen_cmd->add_option("--seed", gen_seed, "RNG seed");
  gen_cmd->add_option("--out", gen_out, "Output dataset directory")->required();
  gen_cmd->add_option("--feat-dim", feat_dim, "Feature dimension");
  gen_cmd->add_option("--feat-noise", feat_noise, "Feature noise sigma");
  gen_cmd->add_option("--feat-signal", feat_signal, "Class signal magnitude");

  std::string fractions = "0.05,0.1,0.15,0.25,0.5,0.75,0.95";
  auto* sweep_cmd = app.add_subcommand("sweep-d", "Accuracy versus low-frequency fraction");
  add_model_flags(sweep_cmd, rc_sweep);
  sweep_cmd->add_option("--fractions", fractions, "Comma-separated fractions of n");

  int bench_runs = 5, bench_order = 2;
  auto* bench_cmd = app.add_subcommand("bench", "Time eigen vs Chebyshev operator construction");
  add_model_flags(bench_cmd, rc_bench);
  bench_cmd->add_option("--runs", bench_runs, "Timed repetitions per route");
  bench_cmd->add_option("--bench-order", bench_order, "Chebyshev order for the fast route");

  auto* attn_cmd = app.add_subcommand("attention", "Train and report learned branch attention");
  add_model_flags(attn_cmd, rc_attn);

  auto* ko_cmd = app.add_subcommand("knockout", "Evaluate with one branch's attention zeroed");
  add_model_flags(ko_cmd, rc_ko);

  std::size_t barbell_k = 5, barbell_d = 3;
  std::string barbell_out = "runs";
  auto* barbell_cmd = app.add_subcommand("demo-barbell", "Band-limited barbell reconstruction");
  barbell_cmd->add_option("--k", barbell_k, "Clique size (>= 3)");
  barbell_cmd->add_option("--d", barbell_d, "Low-frequency count");
  barbell_cmd->add_option("--out", barbell_out, "Output directory");

  std::string cache_dir = "wavelet-cache";
  auto* wav_cmd = app.add_subcommand("wavelets", "Build and cache the wavelet operator pair");
  add_model_flags(wav_cmd, rc_wav);
  wav_cmd->add_option("--cache-dir", cache_dir, "Cache directory for the binary containers");

  std::vector<std::string> raw_args(argv + 1, argv + argc);
  try {
    for (auto [cmd, rc] : {std::pair{train_cmd, &rc_train}, {sweep_cmd, &rc_sweep},
                           {bench_cmd, &rc_bench}, {attn_cmd, &rc_attn}, {ko_cmd, &rc_ko},
                           {wav_cmd, &rc_wav}})
      apply_config_file(cmd, *rc, raw_args);
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto s_was_set = [](CLI::App* cmd, RunConfig& rc) {
    if (cmd->count("--s") > 0) rc.s_explicit = true;
  };
  s_was_set(train_cmd, rc_train);
  s_was_set(sweep_cmd, rc_sweep);
  s_was_set(bench_cmd, rc_bench);
  s_was_set(attn_cmd, rc_attn);
  s_was_set(ko_cmd, rc_ko);
  s_was_set(wav_cmd, rc_wav);

  try {
    if (train_cmd->parsed()) return cmd_train(rc_train, save_model, emit_embeddings);
    if (gen_cmd->parsed())
      return cmd_gen_sbm(sizes, p_in, p_out, gen_seed, gen_out, feat_dim, feat_noise,
                         feat_signal);
    if (sweep_cmd->parsed()) return cmd_sweep_d(rc_sweep, fractions);
    if (bench_cmd->parsed()) return cmd_bench(rc_bench, bench_runs, bench_order);
    if (attn_cmd->parsed()) return cmd_attention(rc_attn);
    if (ko_cmd->parsed()) return cmd_knockout(rc_ko);
    if (barbell_cmd->parsed()) return cmd_demo_barbell(barbell_k, barbell_d, barbell_out);
    if (wav_cmd->parsed()) return cmd_wavelets(rc_wav, cache_dir);
  } catch (const spgat::DatasetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
