// Training loop with Adam, early stopping on validation loss (restore best
// weights), evaluation, knockouts and the timing benchmark. Each run is
// single-threaded and fully determined by its seed; the multi-seed driver
// farms independent runs out to a small worker pool.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spgat/adam.hpp"
#include "spgat/dataset.hpp"
#include "spgat/graph.hpp"
#include "spgat/matrix.hpp"
#include "spgat/model.hpp"
#include "spgat/rng.hpp"
#include "spgat/wavelets.hpp"

namespace spgat {

class TrainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EpochMetrics {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct Timings {
  double operator_build_s = 0.0;
  double train_s = 0.0;
  double mean_epoch_s = 0.0;
};

struct ExperimentReport {
  ModelConfig config;
  std::string dataset_name;
  std::size_t n_nodes = 0;
  std::size_t input_dim = 0;
  int num_classes = 0;
  std::size_t low_frequency_d = 0;  // exact variant
  std::vector<EpochMetrics> epochs;
  int best_epoch = -1;
  int stopped_epoch = 0;
  double test_accuracy = 0.0;
  std::array<std::pair<double, double>, 2> attention{};
  Timings timings;
};

struct TrainState {
  SpGATModel model;
  AdamState adam;
  Rng rng;
  double best_val_loss = std::numeric_limits<double>::infinity();
  int patience_counter = 0;
  int epoch = 0;
};

inline std::size_t argmax_row(const Matrix& m, std::size_t row) {
  const double* r = m.row(row);
  std::size_t best = 0;
  for (std::size_t c = 1; c < m.cols(); ++c)
    if (r[c] > r[best]) best = c;
  return best;
}

inline double accuracy_from_logits(const Matrix& logits, const std::vector<int>& labels,
                                   const std::vector<std::uint32_t>& nodes) {
  if (nodes.empty()) throw std::invalid_argument("accuracy: empty node set");
  std::size_t hits = 0;
  for (auto node : nodes)
    if (static_cast<int>(argmax_row(logits, node)) == labels[node]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

inline double evaluate(const SpGATModel& model, const Matrix& features,
                       const std::vector<int>& labels,
                       const std::vector<std::uint32_t>& nodes) {
  Matrix lg = model.logits(features, false, nullptr);
  return accuracy_from_logits(lg, labels, nodes);
}

enum class Branch { low, high };

// Evaluate with one branch's attention forced to zero in every layer; the
// other branch keeps its learned value, not renormalized.
inline double frequency_knockout(const SpGATModel& model, const Matrix& features,
                                 const std::vector<int>& labels,
                                 const std::vector<std::uint32_t>& nodes, Branch branch) {
  AttentionOverride ov;
  if (branch == Branch::low)
    ov.zero_low = true;
  else
    ov.zero_high = true;
  Matrix lg = model.logits(features, false, nullptr, nullptr, &ov);
  return accuracy_from_logits(lg, labels, nodes);
}

inline std::array<std::pair<double, double>, 2> report_attention(const SpGATModel& model) {
  return model.attention_values();
}

struct TrainResult {
  SpGATModel model;
  ExperimentReport report;
  Matrix features;  // after preprocessing, as seen by the model
};

inline TrainResult train_model(const ModelConfig& cfg, const Dataset& ds,
                               const std::string& dataset_name = "dataset") {
  cfg.validate();
  if (ds.split.train.empty() || ds.split.val.empty() || ds.split.test.empty())
    throw TrainError("train: empty split");

  using clock = std::chrono::steady_clock;
  auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  Matrix features = ds.features;
  if (cfg.row_normalize) row_normalize(features);

  const auto t_build = clock::now();
  BranchOps ops = build_branch_operators(cfg, ds.graph);
  const double build_s = seconds_since(t_build);
  const std::size_t d = ops.d;

  TrainState state{
      SpGATModel(cfg, std::move(ops), features.cols(), ds.split.num_classes),
      AdamState({features.cols() * static_cast<std::size_t>(cfg.hidden), 2,
                 static_cast<std::size_t>(cfg.hidden) * ds.split.num_classes, 2}),
      Rng(mix_seed(cfg.seed, 2)),
  };
  AdamSettings adam_cfg;
  adam_cfg.lr = cfg.learning_rate;

  ExperimentReport report;
  report.config = cfg;
  report.dataset_name = dataset_name;
  report.n_nodes = ds.graph.n;
  report.input_dim = features.cols();
  report.num_classes = ds.split.num_classes;
  report.low_frequency_d = d;
  report.timings.operator_build_s = build_s;

  SpGATModel best_model = state.model;

  const auto t_train = clock::now();
  for (; state.epoch < cfg.max_epochs; ++state.epoch) {
    GradientBundle grads;
    const double train_loss = state.model.loss_and_gradients(
        features, ds.split.labels, ds.split.train, &state.rng, grads, true);
    if (!std::isfinite(train_loss)) {
      auto norm = [](const Matrix& w) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w.data()[i] * w.data()[i];
        return std::sqrt(s);
      };
      throw TrainError("non-finite training loss at epoch " + std::to_string(state.epoch) +
                       " (|W1|=" + std::to_string(norm(state.model.layer(0).weight)) +
                       ", |W2|=" + std::to_string(norm(state.model.layer(1).weight)) + ")");
    }

    state.adam.begin_step();
    auto& l1 = state.model.layer(0);
    auto& l2 = state.model.layer(1);
    state.adam.update(0, l1.weight.data(), grads.d_w1.data(), l1.weight.size(), adam_cfg);
    double a1[2] = {l1.attn_low, l1.attn_high};
    const double ga1[2] = {grads.d_a1_low, grads.d_a1_high};
    state.adam.update(1, a1, ga1, 2, adam_cfg);
    l1.attn_low = a1[0];
    l1.attn_high = a1[1];
    state.adam.update(2, l2.weight.data(), grads.d_w2.data(), l2.weight.size(), adam_cfg);
    double a2[2] = {l2.attn_low, l2.attn_high};
    const double ga2[2] = {grads.d_a2_low, grads.d_a2_high};
    state.adam.update(3, a2, ga2, 2, adam_cfg);
    l2.attn_low = a2[0];
    l2.attn_high = a2[1];

    Matrix val_logits = state.model.logits(features, false, nullptr);
    auto [val_loss, unused] = masked_softmax_xent(val_logits, ds.split.labels, ds.split.val);
    (void)unused;
    const double val_acc = accuracy_from_logits(val_logits, ds.split.labels, ds.split.val);
    report.epochs.push_back({train_loss, val_loss, val_acc});

    if (val_loss < state.best_val_loss) {
      state.best_val_loss = val_loss;
      state.patience_counter = 0;
      report.best_epoch = state.epoch;
      best_model = state.model;
    } else if (++state.patience_counter >= cfg.patience) {
      ++state.epoch;
      break;
    }
  }
  report.stopped_epoch = state.epoch;
  report.timings.train_s = seconds_since(t_train);
  report.timings.mean_epoch_s =
      report.epochs.empty() ? 0.0 : report.timings.train_s / report.epochs.size();

  TrainResult result{std::move(best_model), std::move(report), std::move(features)};
  result.report.test_accuracy =
      evaluate(result.model, result.features, ds.split.labels, ds.split.test);
  result.report.attention = result.model.attention_values();
  return result;
}

inline ExperimentReport train(const ModelConfig& cfg, const Dataset& ds,
                              const std::string& dataset_name = "dataset") {
  return train_model(cfg, ds, dataset_name).report;
}

// ---------------------------------------------------------------------------
// Multi-seed driver
// ---------------------------------------------------------------------------

inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

// Sample standard deviation; zero for fewer than two values.
inline double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

struct MultiSeedResult {
  std::vector<ExperimentReport> reports;  // in seed order
  double mean_acc = 0.0;
  double std_acc = 0.0;
};

inline MultiSeedResult train_multi_seed(const ModelConfig& base, const Dataset& ds,
                                        const std::vector<std::uint64_t>& seeds,
                                        int jobs = 1,
                                        const std::string& dataset_name = "dataset") {
  MultiSeedResult out;
  out.reports.resize(seeds.size());
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(seeds.size())));
  std::atomic<std::size_t> cursor{0};
  std::vector<std::exception_ptr> errors(seeds.size());
  auto work = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        ModelConfig cfg = base;
        cfg.seed = seeds[i];
        out.reports[i] = train(cfg, ds, dataset_name);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> accs;
  for (const auto& r : out.reports) accs.push_back(r.test_accuracy);
  out.mean_acc = mean_of(accs);
  out.std_acc = std_of(accs);
  return out;
}

// ---------------------------------------------------------------------------
// d sweep
// ---------------------------------------------------------------------------

struct SweepRow {
  double fraction = 0.0;
  std::size_t d = 0;
  double mean_acc = 0.0;
  double std_acc = 0.0;
  std::vector<double> per_seed;
};

inline std::vector<SweepRow> sweep_d(const ModelConfig& base, const Dataset& ds,
                                     const std::vector<double>& fractions,
                                     const std::vector<std::uint64_t>& seeds, int jobs = 1,
                                     const std::string& dataset_name = "dataset") {
  if (base.variant != Variant::exact)
    throw std::invalid_argument("sweep_d: exact variant only");
  std::vector<SweepRow> rows;
  for (double f : fractions) {
    ModelConfig cfg = base;
    cfg.d_fraction = f;
    cfg.validate();
    auto ms = train_multi_seed(cfg, ds, seeds, jobs, dataset_name);
    SweepRow row;
    row.fraction = f;
    row.d = low_frequency_count(f, ds.graph.n);
    row.mean_acc = ms.mean_acc;
    row.std_acc = ms.std_acc;
    for (const auto& r : ms.reports) row.per_seed.push_back(r.test_accuracy);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Wavelet construction benchmark
// ---------------------------------------------------------------------------

struct BenchResult {
  std::size_t n = 0;
  std::size_t num_edges = 0;
  int runs = 0;
  int cheby_order = 2;
  double eigen_median_s = 0.0;
  double cheby_median_s = 0.0;
  double speedup = 0.0;
  std::vector<double> eigen_runs_s, cheby_runs_s;
};

inline double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Wall-clock comparison of obtaining the spectral operators: full
// eigendecomposition + heat filtering versus the Chebyshev recurrence.
inline BenchResult bench_wavelets(const Graph& g, double s, double t, int cheby_order,
                                  int runs = 5) {
  if (runs < 1) throw std::invalid_argument("bench_wavelets: runs must be >= 1");
  using clock = std::chrono::steady_clock;
  BenchResult res;
  res.n = g.n;
  res.num_edges = g.num_edges();
  res.runs = runs;
  res.cheby_order = cheby_order;
  for (int r = 0; r < runs; ++r) {
    {
      const auto t0 = clock::now();
      NormalizedOperators ops = normalize(g);
      EigenSystem eig = eigendecompose(ops);
      WaveletBasis basis = heat_wavelets(eig, s, t);
      res.eigen_runs_s.push_back(std::chrono::duration<double>(clock::now() - t0).count());
      if (basis.psi.rows() != g.n) throw TrainError("bench: unexpected basis shape");
    }
    {
      const auto t0 = clock::now();
      NormalizedOperators ops = normalize(g);
      BranchKernels k = chebyshev_branch_operators(ops, s, cheby_order, t);
      res.cheby_runs_s.push_back(std::chrono::duration<double>(clock::now() - t0).count());
      if (k.low.rows() != g.n) throw TrainError("bench: unexpected kernel shape");
    }
  }
  res.eigen_median_s = median_of(res.eigen_runs_s);
  res.cheby_median_s = median_of(res.cheby_runs_s);
  res.speedup = res.cheby_median_s > 0.0 ? res.eigen_median_s / res.cheby_median_s : 0.0;
  return res;
}

}  // namespace spgat
