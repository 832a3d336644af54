#pragma once

#include <vector>

#include "mtp/nn/tensor.hpp"

namespace mtp::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip = 1.0;  // global gradient norm; <= 0 disables clipping
};

class Adam {
 public:
  Adam(const ParamStore& params, AdamConfig cfg);

  // Global-norm clip followed by the standard bias-corrected update.
  // Mutates parameter values in place; gradients are left untouched.
  void adam_step(ParamStore& params);

  long steps() const { return t_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace mtp::nn
