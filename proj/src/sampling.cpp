#include "ka/sampling.hpp"

#include <cstdlib>
#include <string>

namespace ka {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("KA_SPINOR_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    return std::stoull(env, nullptr, 0);
  } catch (const std::exception&) {
    throw Error(std::string("KA_SPINOR_SEED is not an integer: ") + env);
  }
}

cplx Rng::complex_normal() {
  constexpr double s = 0.70710678118654752440;
  double re = normal();
  double im = normal();
  return {s * re, s * im};
}

Multivector random_form(Rng& rng, Signature sig, int degree) {
  Multivector out(sig);
  for (Blade b = 0; b <= sig.volume_mask(); ++b) {
    if (degree >= 0 && grade_of(b) != degree) continue;
    out.add(b, rng.complex_normal());
  }
  return out;
}

Multivector random_real_form(Rng& rng, Signature sig, int degree) {
  Multivector out(sig);
  for (Blade b = 0; b <= sig.volume_mask(); ++b) {
    if (degree >= 0 && grade_of(b) != degree) continue;
    out.add(b, rng.normal());
  }
  return out;
}

Eigen::VectorXcd random_spinor(Rng& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

}  // namespace ka
