#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ka {

using cplx = std::complex<double>;
using Blade = std::uint32_t;

constexpr int kMaxDim = 12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Signature (p,q) of the quadratic space. Basis index i (0-based) squares to
// +1 for i < p and to -1 otherwise.
struct Signature {
  int p = 0;
  int q = 0;

  Signature() = default;
  Signature(int p_, int q_);

  int d() const { return p + q; }
  int metric(int i) const { return i < p ? 1 : -1; }
  Blade volume_mask() const { return d() == 0 ? 0u : ((Blade(1) << d()) - 1u); }
  std::size_t blade_count() const { return std::size_t(1) << d(); }
  // Product of h^{ii} over the indices of a blade; equals <e^I, e^I>.
  int blade_metric(Blade b) const;
  std::string str() const;

  bool operator==(const Signature& o) const { return p == o.p && q == o.q; }
  bool operator!=(const Signature& o) const { return !(*this == o); }
};

int grade_of(Blade b);
// Sign of e^A ◇ e^B relative to the canonical blade e^{A xor B}, metric factors included.
int blade_product_sign(const Signature& sig, Blade a, Blade b);
// Sign from reordering e^A e^B into ascending order (no metric).
int reorder_sign(Blade a, Blade b);

class Multivector {
 public:
  using Terms = std::map<Blade, cplx>;

  Multivector() = default;
  explicit Multivector(Signature sig) : sig_(sig) {}

  static Multivector scalar(Signature sig, cplx c);
  static Multivector blade(Signature sig, Blade b, cplx c = 1.0);
  // e^{i+1} for 0-based i.
  static Multivector basis(Signature sig, int i, cplx c = 1.0);
  static Multivector one_form(Signature sig, const Eigen::VectorXcd& comps);
  static Multivector volume(Signature sig);

  const Signature& sig() const { return sig_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx coeff(Blade b) const;
  void add(Blade b, cplx c);
  void set(Blade b, cplx c);

  Multivector grade(int k) const;
  // Sum of the components with degree <= k.
  Multivector truncated(int k) const;
  cplx scalar_part() const { return coeff(0); }
  std::vector<int> grades(double tol = 0.0) const;
  Eigen::VectorXcd one_form_coeffs() const;

  double norm() const;
  double max_abs() const;
  Multivector pruned(double abs_tol) const;

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(cplx c);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, cplx c) { return a *= c; }
  friend Multivector operator*(cplx c, Multivector a) { return a *= c; }
  friend Multivector operator*(double c, Multivector a) { return a *= cplx(c); }
  friend Multivector operator*(Multivector a, double c) { return a *= cplx(c); }
  friend Multivector operator/(Multivector a, cplx c) { return a *= (1.0 / c); }
  friend Multivector operator/(Multivector a, double c) { return a *= cplx(1.0 / c); }
  Multivector operator-() const { return *this * -1.0; }

  std::string str() const;

 private:
  Signature sig_;
  Terms terms_;
};

void require_same_sig(const Multivector& a, const Multivector& b);

double distance(const Multivector& a, const Multivector& b);

Multivector wedge(const Multivector& a, const Multivector& b);
// Contraction with the metric dual of the one-form v.
Multivector interior(const Multivector& v, const Multivector& a);
// Contraction with the basis vector e_i (0-based), no metric factor.
Multivector interior_basis(int i, const Multivector& a);
Multivector generalized_product(const Multivector& a, const Multivector& b, int k);
Multivector geometric_product(const Multivector& a, const Multivector& b);
// Geometric product assembled from the generalized products; slow, used as oracle.
Multivector geometric_product_expanded(const Multivector& a, const Multivector& b);

Multivector parity(const Multivector& a);
Multivector reversion(const Multivector& a);
Multivector conj(const Multivector& a);
Multivector hodge_star(const Multivector& a);
// Complex-bilinear extension of the metric; components of distinct degree are orthogonal.
cplx inner(const Multivector& a, const Multivector& b);
cplx ka_trace(const Multivector& a);
Multivector complex_volume(Signature sig);
// Image of a under the algebra automorphism induced by M acting on one-forms:
// e^i maps to sum_j M(j,i) e^j.
Multivector outermorphism(const Eigen::MatrixXcd& M, const Multivector& a);

inline Multivector operator^(const Multivector& a, const Multivector& b) { return wedge(a, b); }

}  // namespace ka
