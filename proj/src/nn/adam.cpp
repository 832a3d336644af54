#include "mtp/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace mtp::nn {

Adam::Adam(const ParamStore& params, AdamConfig cfg) : cfg_(cfg) {
  m_.resize(static_cast<std::size_t>(params.count()));
  v_.resize(static_cast<std::size_t>(params.count()));
  for (int i = 0; i < params.count(); ++i) {
    m_[static_cast<std::size_t>(i)].assign(params.entry(i).size(), 0.0);
    v_[static_cast<std::size_t>(i)].assign(params.entry(i).size(), 0.0);
  }
}

void Adam::adam_step(ParamStore& params) {
  if (static_cast<int>(m_.size()) != params.count()) {
    throw std::invalid_argument("adam_step: optimizer/store shape mismatch");
  }
  double clip_factor = 1.0;
  if (cfg_.clip > 0.0) {
    const double norm = params.grad_norm();
    if (norm > cfg_.clip) clip_factor = cfg_.clip / norm;
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (int i = 0; i < params.count(); ++i) {
    auto& e = params.entry(i);
    auto& m = m_[static_cast<std::size_t>(i)];
    auto& v = v_[static_cast<std::size_t>(i)];
    if (m.size() != e.size()) {
      throw std::invalid_argument("adam_step: entry size mismatch");
    }
    for (std::size_t k = 0; k < e.size(); ++k) {
      const double g = e.grad[k] * clip_factor;
      m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * g;
      v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m[k] / bc1;
      const double vhat = v[k] / bc2;
      e.value[k] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace mtp::nn
