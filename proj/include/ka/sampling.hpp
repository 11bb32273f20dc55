#pragma once

#include <cstdint>
#include <random>

#include "ka/multivector.hpp"

namespace ka {

std::uint64_t splitmix64(std::uint64_t x);

// Seed from KA_SPINOR_SEED when set, otherwise the given fallback.
std::uint64_t seed_from_env(std::uint64_t fallback);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  // Independent stream keyed by (seed, key); does not advance this generator.
  Rng split(std::uint64_t key) const { return Rng(splitmix64(seed_ ^ splitmix64(key + 0x632be59bd9b4e019ULL))); }

  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }
  // Standard complex normal: E|z|^2 = 1.
  cplx complex_normal();
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// degree < 0 samples every degree.
Multivector random_form(Rng& rng, Signature sig, int degree = -1);
Multivector random_real_form(Rng& rng, Signature sig, int degree = -1);
Eigen::VectorXcd random_spinor(Rng& rng, int n);

}  // namespace ka
