#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mtp/nn/rng.hpp"

namespace mtp::nn {

struct ParamEntry {
  std::string name;
  std::vector<std::size_t> shape;
  std::uint64_t seed = 0;  // initializer stream, 0 = zero-initialized
  std::vector<double> value;
  std::vector<double> grad;

  std::size_t size() const {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }
};

// Flat named parameter store; entry order is the manifest order used by
// checkpoints and the optimizer.
class ParamStore {
 public:
  ParamStore() = default;
  explicit ParamStore(std::uint64_t master_seed) : master_seed_(master_seed) {}

  int add_zeros(const std::string& name, std::vector<std::size_t> shape);
  int add_const(const std::string& name, std::vector<std::size_t> shape,
                double fill);
  // uniform(-scale, scale) from a per-entry stream derived off the master seed
  int add_uniform(const std::string& name, std::vector<std::size_t> shape,
                  double scale);

  int find(const std::string& name) const;  // -1 when absent
  ParamEntry& entry(int id) { return entries_[static_cast<std::size_t>(id)]; }
  const ParamEntry& entry(int id) const {
    return entries_[static_cast<std::size_t>(id)];
  }
  int count() const { return static_cast<int>(entries_.size()); }
  std::uint64_t master_seed() const { return master_seed_; }

  void zero_grad();
  double grad_norm() const;
  std::size_t total_size() const;

 private:
  int add_entry(ParamEntry e);

  std::uint64_t master_seed_ = 0;
  std::vector<ParamEntry> entries_;
  std::unordered_map<std::string, int> index_;
};

// KL(N(mu, sigma) || N(0, 1)) summed over components. Throws on sigma <= 0.
double kl_standard_gaussian(std::span<const double> mu,
                            std::span<const double> sigma);

}  // namespace mtp::nn
