#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ka/lowdim.hpp"

namespace ka {

enum class ConditionCase { d2, d3, d4, d5, d6, d8, d6_lorentz };

std::string to_string(ConditionCase c);
ConditionCase condition_case_from_string(const std::string& s);
ConditionCase condition_case_for(Signature sig);

struct ConditionReport {
  std::map<std::string, double> residuals;
  bool passed = false;
  ConditionCase dimension_case = ConditionCase::d2;
  double tol = 1e-9;

  double worst() const;
};

// Named rows of the degree-separated system; each row vanishes iff X.eta = 0 holds
// in that degree. Rows are linear in X. The data must be the Hermitian structure data
// of eta.
using Rows = std::vector<std::pair<std::string, Multivector>>;
Rows instanton_rows(const Multivector& F, const StructureData& data);
Rows curving_rows(const Multivector& H, const StructureData& data);

// Residuals are |row| / (|X| w), with w the degree-zero scale r of the square where the
// rows are homogeneous in it.
ConditionReport instanton_residual(const Multivector& F, const StructureData& data, double tol = 1e-9);
ConditionReport curving_residual(const Multivector& H, const StructureData& data, double tol = 1e-9);

// |quantize(X) eta| / (|X| |eta|).
double clifford_kernel_oracle(const Multivector& form, const Vector& eta, const CliffordRep& rep);

// Matrix of X -> quantize(X) eta on the coordinate basis of degree-k forms.
Matrix clifford_kernel_map(const Vector& eta, const CliffordRep& rep, int degree);
// Matrix of X -> (stacked rows) on the same basis. Rows whose name is in skip are left out.
Matrix row_system_map(const StructureData& data, int degree, const std::vector<std::string>& skip = {});
// Orthonormal basis of the nullspace, SVD with threshold rel_tol * sigma_max.
Matrix nullspace(const Matrix& a, double rel_tol = 1e-8);
int kernel_dimension(const Vector& eta, const CliffordRep& rep, int degree);
// Basis-coordinate vector of a degree-k form and its inverse.
Vector form_coordinates(const Multivector& x, int degree);
Multivector form_from_coordinates(Signature sig, const Vector& c, int degree);

struct EquivalenceReport {
  int kernel_dim = -1;
  int system_dim = -1;
  // |system map on kernel basis| / |system map| and the converse.
  double system_on_kernel = 0.0;
  double kernel_on_system = 0.0;
  bool passed = false;
};
EquivalenceReport nullspace_equivalence(const Vector& eta, const PairedModule& pm, int mu, int degree,
                                        double tol = 1e-8);

// The two-dimensional Minkowski times R^4 family of curvings built from polynomial
// f, a_v = d'g and b' independent of x_v, with a_u fixed by integrating the first
// reduced equation along x_v. Frame coordinates come from the Dirac current of eta.
// Residual names: reduced_first, reduced_second, curving, clifford.
ConditionReport flat_lorentz_example(const Vector& eta, const PairedModule& pm, int mu, Rng& rng, int points = 8,
                                     double tol = 1e-9);

}  // namespace ka
