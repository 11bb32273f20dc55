#pragma once

#include <optional>
#include <vector>

#include "ka/multivector.hpp"

namespace ka {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Irreducible complex Clifford module. For odd d the label ell is the
// eigenvalue of the complex volume form; for even d ell is 0.
class CliffordRep {
 public:
  static CliffordRep build(Signature sig, int ell = 1);
  // Shared immutable instance per (sig, ell); safe for concurrent callers.
  static const CliffordRep& cached(Signature sig, int ell = 1);

  const Signature& sig() const { return sig_; }
  int d() const { return sig_.d(); }
  int m() const { return sig_.d() / 2; }
  int dim() const { return n_; }
  int ell() const { return ell_; }
  bool odd() const { return sig_.d() % 2 == 1; }

  const std::vector<Matrix>& gammas() const { return gammas_; }
  const Matrix& gamma(int i) const { return gammas_.at(i); }
  // Ordered product gamma^{i1}...gamma^{ik} for the blade.
  const Matrix& blade_op(Blade b) const { return blades_.at(b); }
  // e^I e^I = blade_square(I) * 1, so (gamma^I)^{-1} = blade_square(I) * gamma^I.
  int blade_square(Blade b) const { return blade_product_sign(sig_, b, b); }
  Matrix blade_inverse(Blade b) const { return double(blade_square(b)) * blades_.at(b); }
  const Matrix& volume_op() const { return volume_op_; }

  // Blades used as a basis of End(Sigma): all for even d, degree <= m for odd d.
  bool basis_blade(Blade b) const { return !odd() || grade_of(b) <= m(); }

  Matrix quantize(const Multivector& a) const;
  Multivector dequantize(const Matrix& e) const;

  double clifford_residual() const;

 private:
  Signature sig_;
  int ell_ = 0;
  int n_ = 1;
  std::vector<Matrix> gammas_;
  std::vector<Matrix> blades_;
  Matrix volume_op_;
};

// (1 + ell nu_C)/2 applied by left multiplication.
Multivector project_ell(const Multivector& a, int ell);
// Degree <= (d-1)/2 part.
Multivector project_lower(const Multivector& a);
// 2 P_<(P_ell(a)); lands in the truncated algebra.
Multivector push_truncated(const Multivector& a, int ell);
Multivector vee_product(const Multivector& a, const Multivector& b, int ell);

// Product used by the square theorems: geometric product for even d, vee for odd d.
Multivector algebra_product(const CliffordRep& rep, const Multivector& a, const Multivector& b);

Matrix chirality_projector(const CliffordRep& rep, int mu);
Vector chirality_project(const CliffordRep& rep, const Vector& eta, int mu);
// +1 or -1 for a chiral spinor, nullopt when mixed.
std::optional<int> chirality_of(const CliffordRep& rep, const Vector& eta, double tol = 1e-10);

}  // namespace ka
