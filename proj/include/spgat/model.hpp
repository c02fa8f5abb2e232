// Two-layer spectral attention model. Each layer shares one weight matrix
// across both frequency branches and holds two raw attention logits that are
// softmax-normalized on every forward pass:
//
//   X   = H Theta^T
//   H'  = sigma( AGG( alpha_L * low_op X , alpha_H * high_op X ) )
//
// The branch operators are fixed n x n matrices: products of the split
// wavelet blocks for the exact variant, the complementary Chebyshev kernel
// pair for the fast variant. ReLU on the hidden layer, identity on the
// output layer; softmax lives in the loss. Gradients are hand-derived
// reverse mode through the aggregation, the attention softmax and the
// shared transform.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spgat/eigensolver.hpp"
#include "spgat/graph.hpp"
#include "spgat/matrix.hpp"
#include "spgat/rng.hpp"
#include "spgat/wavelets.hpp"

namespace spgat {

enum class Aggregator { max, mean };
enum class Variant { exact, cheby };

struct ModelConfig {
  Variant variant = Variant::exact;
  int hidden = 64;
  double scale = 1.0;       // wavelet scale s
  double threshold = 1e-4;  // sparsification t
  int cheby_order = 1;      // M, cheby variant
  double d_fraction = 0.05; // low-frequency fraction of n, exact variant
  Aggregator agg = Aggregator::max;
  double dropout = 0.5;
  double weight_decay = 5e-4;
  bool l2_all_layers = false;  // default: first-layer weights only
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
  int max_epochs = 500;
  int patience = 100;
  bool row_normalize = true;
  double lambda_max = 2.0;

  void validate() const {
    if (hidden < 1) throw std::invalid_argument("config: hidden must be >= 1");
    if (variant == Variant::exact && !(d_fraction > 0.0 && d_fraction < 1.0))
      throw std::invalid_argument("config: d_fraction must be in (0, 1) for the exact variant");
    if (variant == Variant::exact && !(scale > 0.0))
      throw std::invalid_argument("config: scale must be positive for the exact variant");
    if (variant == Variant::cheby && scale < 0.0)
      throw std::invalid_argument("config: scale must be nonnegative");
    if (variant == Variant::cheby && cheby_order < 1)
      throw std::invalid_argument("config: cheby_order must be >= 1");
    if (!(dropout >= 0.0 && dropout < 1.0))
      throw std::invalid_argument("config: dropout must be in [0, 1)");
    if (threshold < 0.0) throw std::invalid_argument("config: threshold must be >= 0");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("config: learning_rate must be positive");
    if (max_epochs < 0) throw std::invalid_argument("config: max_epochs must be >= 0");
    if (patience < 1) throw std::invalid_argument("config: patience must be >= 1");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("config: lambda_max must be positive");
  }
};

inline const char* to_string(Aggregator a) { return a == Aggregator::max ? "max" : "mean"; }
inline const char* to_string(Variant v) { return v == Variant::exact ? "exact" : "cheby"; }

// ---------------------------------------------------------------------------
// Initialization and attention
// ---------------------------------------------------------------------------

// Uniform(-a, a) with a = sqrt(6 / (rows + cols)).
inline Matrix glorot_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("glorot_init: empty shape");
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  Rng rng(seed);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-a, a);
  return m;
}

// Softmax over the two raw logits, computed with max subtraction.
inline std::pair<double, double> attention(double a_low, double a_high) {
  const double m = std::max(a_low, a_high);
  const double el = std::exp(a_low - m);
  const double eh = std::exp(a_high - m);
  const double z = el + eh;
  return {el / z, eh / z};
}

// ---------------------------------------------------------------------------
// Layer
// ---------------------------------------------------------------------------

struct SpGATLayer {
  Matrix weight;  // p_in x q_out, shared across branches
  double attn_low = 0.0;
  double attn_high = 0.0;
  const CsrMatrix* low_op = nullptr;
  const CsrMatrix* high_op = nullptr;
  Aggregator agg = Aggregator::max;
  double dropout_rate = 0.0;
  bool relu = true;
};

struct LayerTape {
  Matrix input;                         // post-dropout layer input
  std::vector<std::uint8_t> keep_mask;  // empty unless dropout was applied
  double keep_scale = 1.0;
  Matrix x;                             // input * weight
  Matrix conv_low, conv_high;           // low_op x, high_op x
  double alpha_low = 0.5, alpha_high = 0.5;
  std::vector<std::uint8_t> low_wins;   // MAX selection, ties go to low
  Matrix pre_activation;
};

struct LayerGrads {
  Matrix d_weight;
  double d_attn_low = 0.0;
  double d_attn_high = 0.0;
  Matrix d_input;
};

// Knockout evaluation: force one branch's attention to zero, the other
// keeps its learned softmax value un-renormalized.
struct AttentionOverride {
  bool zero_low = false;
  bool zero_high = false;
};

inline Matrix layer_forward(const SpGATLayer& layer, const Matrix& h, bool training,
                            Rng* rng, LayerTape* tape,
                            const AttentionOverride* override_attn = nullptr) {
  if (layer.low_op->cols != h.rows())
    throw std::invalid_argument("layer_forward: operator n=" + std::to_string(layer.low_op->cols) +
                                " vs input rows " + std::to_string(h.rows()));
  if (layer.weight.rows() != h.cols())
    throw std::invalid_argument("layer_forward: weight expects " +
                                std::to_string(layer.weight.rows()) + " features, got " +
                                std::to_string(h.cols()));

  Matrix input = h;
  std::vector<std::uint8_t> keep;
  double keep_scale = 1.0;
  if (training && layer.dropout_rate > 0.0) {
    if (!rng) throw std::invalid_argument("layer_forward: training dropout needs an rng");
    keep.resize(input.size());
    keep_scale = 1.0 / (1.0 - layer.dropout_rate);
    for (std::size_t i = 0; i < input.size(); ++i) {
      keep[i] = rng->uniform01() >= layer.dropout_rate ? 1 : 0;
      input.data()[i] = keep[i] ? input.data()[i] * keep_scale : 0.0;
    }
  }

  Matrix x = matmul(input, layer.weight);
  auto [alpha_low, alpha_high] = attention(layer.attn_low, layer.attn_high);
  if (override_attn) {
    if (override_attn->zero_low) alpha_low = 0.0;
    if (override_attn->zero_high) alpha_high = 0.0;
  }
  Matrix conv_low = csr_matmul(*layer.low_op, x);
  Matrix conv_high = csr_matmul(*layer.high_op, x);

  const std::size_t sz = conv_low.size();
  Matrix pre(conv_low.rows(), conv_low.cols());
  std::vector<std::uint8_t> low_wins;
  if (layer.agg == Aggregator::mean) {
    for (std::size_t i = 0; i < sz; ++i)
      pre.data()[i] = 0.5 * (alpha_low * conv_low.data()[i] + alpha_high * conv_high.data()[i]);
  } else {
    low_wins.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) {
      const double zl = alpha_low * conv_low.data()[i];
      const double zh = alpha_high * conv_high.data()[i];
      low_wins[i] = zl >= zh ? 1 : 0;
      pre.data()[i] = low_wins[i] ? zl : zh;
    }
  }

  Matrix out = pre;
  if (layer.relu)
    for (std::size_t i = 0; i < sz; ++i)
      if (out.data()[i] < 0.0) out.data()[i] = 0.0;

  if (tape) {
    tape->input = std::move(input);
    tape->keep_mask = std::move(keep);
    tape->keep_scale = keep_scale;
    tape->x = std::move(x);
    tape->conv_low = std::move(conv_low);
    tape->conv_high = std::move(conv_high);
    tape->alpha_low = alpha_low;
    tape->alpha_high = alpha_high;
    tape->low_wins = std::move(low_wins);
    tape->pre_activation = std::move(pre);
  }
  return out;
}

inline LayerGrads layer_backward(const SpGATLayer& layer, const LayerTape& tape,
                                 const Matrix& d_out) {
  if (d_out.rows() != tape.pre_activation.rows() || d_out.cols() != tape.pre_activation.cols())
    throw std::invalid_argument("layer_backward: gradient shape mismatch");
  const std::size_t sz = d_out.size();

  Matrix d_pre = d_out;
  if (layer.relu)
    for (std::size_t i = 0; i < sz; ++i)
      if (tape.pre_activation.data()[i] <= 0.0) d_pre.data()[i] = 0.0;

  Matrix d_zl(d_pre.rows(), d_pre.cols());
  Matrix d_zh(d_pre.rows(), d_pre.cols());
  if (layer.agg == Aggregator::mean) {
    for (std::size_t i = 0; i < sz; ++i) {
      d_zl.data()[i] = 0.5 * d_pre.data()[i];
      d_zh.data()[i] = 0.5 * d_pre.data()[i];
    }
  } else {
    for (std::size_t i = 0; i < sz; ++i) {
      d_zl.data()[i] = tape.low_wins[i] ? d_pre.data()[i] : 0.0;
      d_zh.data()[i] = tape.low_wins[i] ? 0.0 : d_pre.data()[i];
    }
  }

  // d(alpha) then chain through the softmax Jacobian
  double g_low = 0.0, g_high = 0.0;
  for (std::size_t i = 0; i < sz; ++i) {
    g_low += d_zl.data()[i] * tape.conv_low.data()[i];
    g_high += d_zh.data()[i] * tape.conv_high.data()[i];
  }
  const double inner = g_low * tape.alpha_low + g_high * tape.alpha_high;

  LayerGrads grads;
  grads.d_attn_low = tape.alpha_low * (g_low - inner);
  grads.d_attn_high = tape.alpha_high * (g_high - inner);

  // operators are symmetric, so op^T = op
  Matrix d_x = csr_matmul(*layer.low_op, d_zl);
  scale_inplace(d_x, tape.alpha_low);
  Matrix d_xh = csr_matmul(*layer.high_op, d_zh);
  add_inplace(d_x, d_xh, tape.alpha_high);

  grads.d_weight = matmul(transpose(tape.input), d_x);
  grads.d_input = matmul(d_x, transpose(layer.weight));
  if (!tape.keep_mask.empty()) {
    for (std::size_t i = 0; i < grads.d_input.size(); ++i)
      grads.d_input.data()[i] =
          tape.keep_mask[i] ? grads.d_input.data()[i] * tape.keep_scale : 0.0;
  }
  return grads;
}

// ---------------------------------------------------------------------------
// Loss
// ---------------------------------------------------------------------------

// Mean softmax cross-entropy over the masked nodes; gradient is zero
// elsewhere. L2 regularization is the trainer's responsibility.
inline std::pair<double, Matrix> masked_softmax_xent(const Matrix& logits,
                                                     const std::vector<int>& labels,
                                                     const std::vector<std::uint32_t>& mask) {
  if (mask.empty()) throw std::invalid_argument("masked_softmax_xent: empty mask");
  if (logits.rows() != labels.size())
    throw std::invalid_argument("masked_softmax_xent: logits rows vs labels");
  const std::size_t classes = logits.cols();
  Matrix grad(logits.rows(), classes, 0.0);
  double loss = 0.0;
  const double inv = 1.0 / static_cast<double>(mask.size());
  std::vector<double> p(classes);
  for (std::uint32_t node : mask) {
    const double* row = logits.row(node);
    double m = row[0];
    for (std::size_t c = 1; c < classes; ++c) m = std::max(m, row[c]);
    double z = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      p[c] = std::exp(row[c] - m);
      z += p[c];
    }
    const int y = labels[node];
    if (y < 0 || static_cast<std::size_t>(y) >= classes)
      throw std::invalid_argument("masked_softmax_xent: label out of range at node " +
                                  std::to_string(node));
    loss += -(row[y] - m - std::log(z));
    double* grow = grad.row(node);
    for (std::size_t c = 0; c < classes; ++c) grow[c] = (p[c] / z) * inv;
    grow[y] -= inv;
  }
  return {loss * inv, std::move(grad)};
}

// ---------------------------------------------------------------------------
// Parameter census
// ---------------------------------------------------------------------------

struct ParameterCount {
  std::vector<std::size_t> per_layer;  // p*q + 2 each
  std::size_t total = 0;
};

inline ParameterCount count_parameters(const ModelConfig& cfg, std::size_t input_dim,
                                       std::size_t num_classes) {
  ParameterCount pc;
  pc.per_layer.push_back(input_dim * static_cast<std::size_t>(cfg.hidden) + 2);
  pc.per_layer.push_back(static_cast<std::size_t>(cfg.hidden) * num_classes + 2);
  for (auto c : pc.per_layer) pc.total += c;
  return pc;
}

// ---------------------------------------------------------------------------
// Branch operators and the two-layer model
// ---------------------------------------------------------------------------

struct BranchOps {
  CsrMatrix low, high;
  std::size_t d = 0;  // low-frequency count (exact variant; 0 for cheby)
};

inline std::size_t low_frequency_count(double d_fraction, std::size_t n) {
  auto d = static_cast<std::size_t>(std::llround(d_fraction * static_cast<double>(n)));
  if (d < 1) d = 1;
  if (d >= n) d = n - 1;
  return d;
}

inline BranchOps build_branch_operators(const ModelConfig& cfg, const Graph& g) {
  const NormalizedOperators ops = normalize(g);
  BranchOps out;
  if (cfg.variant == Variant::exact) {
    const EigenSystem eig = eigendecompose(ops);
    const WaveletBasis basis = heat_wavelets(eig, cfg.scale, cfg.threshold);
    out.d = low_frequency_count(cfg.d_fraction, g.n);
    const FrequencySplit split = split_frequencies(basis, out.d);
    Matrix low = matmul(split.psi_low, split.psi_inv_low);
    Matrix high = matmul(split.psi_high, split.psi_inv_high);
    sparsify(low, cfg.threshold);
    sparsify(high, cfg.threshold);
    out.low = csr_from_dense(low);
    out.high = csr_from_dense(high);
  } else {
    BranchKernels k =
        chebyshev_branch_operators(ops, cfg.scale, cfg.cheby_order, cfg.threshold, cfg.lambda_max);
    out.low = csr_from_dense(k.low);
    out.high = csr_from_dense(k.high);
  }
  return out;
}

struct GradientBundle {
  Matrix d_w1, d_w2;
  double d_a1_low = 0.0, d_a1_high = 0.0;
  double d_a2_low = 0.0, d_a2_high = 0.0;
};

class SpGATModel {
public:
  SpGATModel(const ModelConfig& cfg, BranchOps ops, std::size_t input_dim, int num_classes)
      : cfg_(cfg), ops_(std::make_shared<BranchOps>(std::move(ops))),
        input_dim_(input_dim), num_classes_(num_classes) {
    cfg_.validate();
    if (num_classes < 2) throw std::invalid_argument("model: need at least two classes");
    layer1_.weight = glorot_init(input_dim, cfg.hidden, mix_seed(cfg.seed, 10));
    layer2_.weight = glorot_init(cfg.hidden, static_cast<std::size_t>(num_classes),
                                 mix_seed(cfg.seed, 11));
    wire_layers();
  }

  SpGATModel(const SpGATModel& o)
      : cfg_(o.cfg_), ops_(o.ops_), input_dim_(o.input_dim_), num_classes_(o.num_classes_),
        layer1_(o.layer1_), layer2_(o.layer2_) {
    wire_layers();
  }
  SpGATModel& operator=(const SpGATModel& o) {
    cfg_ = o.cfg_;
    ops_ = o.ops_;
    input_dim_ = o.input_dim_;
    num_classes_ = o.num_classes_;
    layer1_ = o.layer1_;
    layer2_ = o.layer2_;
    wire_layers();
    return *this;
  }

  const ModelConfig& config() const { return cfg_; }
  std::size_t input_dim() const { return input_dim_; }
  int num_classes() const { return num_classes_; }
  const BranchOps& branch_ops() const { return *ops_; }
  SpGATLayer& layer(int i) { return i == 0 ? layer1_ : layer2_; }
  const SpGATLayer& layer(int i) const { return i == 0 ? layer1_ : layer2_; }

  Matrix logits(const Matrix& features, bool training, Rng* rng,
                std::array<LayerTape, 2>* tapes = nullptr,
                const AttentionOverride* override_attn = nullptr) const {
    LayerTape* t1 = tapes ? &(*tapes)[0] : nullptr;
    LayerTape* t2 = tapes ? &(*tapes)[1] : nullptr;
    Matrix h1 = layer_forward(layer1_, features, training, rng, t1, override_attn);
    return layer_forward(layer2_, h1, training, rng, t2, override_attn);
  }

  // Training objective: masked cross-entropy plus 0.5 * wd * ||Theta||^2 over
  // the regularized weight groups.
  double loss_and_gradients(const Matrix& features, const std::vector<int>& labels,
                            const std::vector<std::uint32_t>& mask, Rng* rng,
                            GradientBundle& out, bool training = true) const {
    std::array<LayerTape, 2> tapes;
    Matrix lg = logits(features, training, rng, &tapes);
    auto [loss, d_logits] = masked_softmax_xent(lg, labels, mask);

    LayerGrads g2 = layer_backward(layer2_, tapes[1], d_logits);
    LayerGrads g1 = layer_backward(layer1_, tapes[0], g2.d_input);

    out.d_w1 = std::move(g1.d_weight);
    out.d_w2 = std::move(g2.d_weight);
    out.d_a1_low = g1.d_attn_low;
    out.d_a1_high = g1.d_attn_high;
    out.d_a2_low = g2.d_attn_low;
    out.d_a2_high = g2.d_attn_high;

    const double wd = cfg_.weight_decay;
    if (wd > 0.0) {
      loss += 0.5 * wd * weight_sq_norm(layer1_.weight);
      add_inplace(out.d_w1, layer1_.weight, wd);
      if (cfg_.l2_all_layers) {
        loss += 0.5 * wd * weight_sq_norm(layer2_.weight);
        add_inplace(out.d_w2, layer2_.weight, wd);
      }
    }
    return loss;
  }

  std::array<std::pair<double, double>, 2> attention_values() const {
    return {attention(layer1_.attn_low, layer1_.attn_high),
            attention(layer2_.attn_low, layer2_.attn_high)};
  }

  // Allocated parameter array lengths, for the census check.
  std::vector<std::size_t> parameter_sizes() const {
    return {layer1_.weight.size() + 2, layer2_.weight.size() + 2};
  }

private:
  static double weight_sq_norm(const Matrix& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w.data()[i] * w.data()[i];
    return s;
  }

  void wire_layers() {
    layer1_.low_op = layer2_.low_op = &ops_->low;
    layer1_.high_op = layer2_.high_op = &ops_->high;
    layer1_.agg = layer2_.agg = cfg_.agg;
    layer1_.dropout_rate = layer2_.dropout_rate = cfg_.dropout;
    layer1_.relu = true;
    layer2_.relu = false;
  }

  ModelConfig cfg_;
  std::shared_ptr<BranchOps> ops_;
  std::size_t input_dim_ = 0;
  int num_classes_ = 0;
  SpGATLayer layer1_, layer2_;
};

}  // namespace spgat
