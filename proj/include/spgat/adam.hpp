// Adam with bias correction. L2 regularization reaches the optimizer as an
// already-added gradient term (see SpGATModel::loss_and_gradients); the
// per-group weight_decay hook here exists for callers that update raw
// arrays directly.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spgat {

struct AdamSettings {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class AdamState {
public:
  // sizes: one entry per parameter group
  explicit AdamState(const std::vector<std::size_t>& sizes) {
    for (auto s : sizes) {
      m_.emplace_back(s, 0.0);
      v_.emplace_back(s, 0.0);
    }
  }

  long step_count() const { return step_; }

  // One update of group `g`: params -= lr * mhat / (sqrt(vhat) + eps).
  // Call begin_step() once per optimization step before updating groups.
  void begin_step() { ++step_; }

  void update(std::size_t g, double* params, const double* grads, std::size_t n,
              const AdamSettings& s, double weight_decay = 0.0) {
    if (g >= m_.size() || m_[g].size() != n)
      throw std::invalid_argument("adam: group shape mismatch");
    if (step_ < 1) throw std::invalid_argument("adam: begin_step() not called");
    auto& m = m_[g];
    auto& v = v_[g];
    const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(step_));
    for (std::size_t i = 0; i < n; ++i) {
      const double grad = grads[i] + weight_decay * params[i];
      m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad;
      v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad * grad;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      params[i] -= s.lr * mhat / (std::sqrt(vhat) + s.eps);
    }
  }

private:
  std::vector<std::vector<double>> m_, v_;
  long step_ = 0;
};

}  // namespace spgat
