#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ka/sampling.hpp"
#include "ka/squares.hpp"

namespace ka {

enum class StructureTag {
  scalar,        // d=2 Hermitian: r
  real1form,     // d=3 Hermitian: r, vartheta
  iso1form,      // d=2,3 bilinear: theta
  iso_pair,      // d=4,5 bilinear: theta_1 ^ theta_2
  iso_triple,    // d=6 bilinear, (5,1) bilinear
  iso_quad,      // d=8 bilinear, pure branch
  kahler2form,   // d=4,5,6 Hermitian: omega (theta for d=5)
  pair,          // d=8 Hermitian: omega, Theta
  complex4form,  // d=8 bilinear, impure branch: lambda, Omega
  lorentz_pair,  // (5,1) Hermitian: u, omega, v
};

std::string to_string(StructureTag t);
StructureTag structure_tag_from_string(const std::string& s);

struct StructureData {
  StructureTag tag = StructureTag::scalar;
  Signature sig;
  PairingKind kind = PairingKind::hermitian;
  // Chirality for even d, module label for odd d.
  int mu = 1;
  std::map<std::string, cplx> scalars;
  std::map<std::string, Multivector> forms;
  std::vector<Multivector> factors;

  cplx scalar(const std::string& name) const;
  const Multivector& form(const std::string& name) const;
  bool has_form(const std::string& name) const { return forms.count(name) > 0; }
};

// Signatures with closed-form templates: (2..6,0), (8,0) and (5,1).
bool lowdim_supported(Signature sig);

// Residuals of the defining invariants of the data (isotropy, duality, normalization identities).
VerificationReport check_invariants(const StructureData& data, double tol = 1e-9);

// Throws Error naming the violated invariants.
Multivector build_square_from_data(const StructureData& data, double tol = 1e-9);

// Reads the structure data off a verified square. mu is the chirality (even d) or ell (odd d).
StructureData extract_structure(const Multivector& square, Signature sig, int mu, PairingKind kind, double tol = 1e-8);

struct PluckerResult {
  std::vector<Multivector> factors;
  double decomposability = 0.0;
  double reconstruction = 0.0;
};

// max over (k-1)-blades X of |(i_X rho) ^ rho|, relative to |rho|^2.
double decomposability_residual(const Multivector& rho);
// Peels one-form factors off a decomposable homogeneous form. Throws when the
// decomposability residual exceeds tol.
PluckerResult plucker_factor(const Multivector& rho, double tol = 1e-8);

VerificationReport verify_8d_impure(cplx lambda, const Multivector& Omega, int mu, double tol = 1e-8);
VerificationReport verify_lorentz6(const Multivector& u, const Multivector& omega, int mu, double tol = 1e-9);
// Isotropic v with <u,v> = 1 for an isotropic u.
Multivector conjugate_oneform(const Multivector& u);

// Orthonormal frame adapted to a pair of conjugate null one-forms: columns are
// u, v, f_1..f_{d-2} in the coordinate basis, oriented so that
// nu = u ^ v ^ f_1 ^ ... ^ f_{d-2}.
struct NullFrame {
  Signature sig;
  Eigen::MatrixXcd frame;
  Eigen::MatrixXcd inverse;
  // Form expressed in frame blades (bit 0 = u, bit 1 = v, bit 2+i = f_{i+1}).
  Multivector to_frame(const Multivector& a) const;
  Multivector from_frame(const Multivector& a) const;
  // Components of a form living on the screen span(f), as a Euclidean form in dimension d-2.
  Multivector screen(const Multivector& a) const;
  Multivector unscreen(const Multivector& a) const;
};
NullFrame null_frame(const Multivector& u, const Multivector& v);

// Table identities for a verified square's data: the residual names describe each condition.
VerificationReport table_conditions(const StructureData& data, double tol = 1e-9);

// Relations tying the Hermitian data to the bilinear data of the same spinor and of
// its conjugate (d = 2..6 Euclidean).
VerificationReport compatibility_relations(const Multivector& hermitian, const Multivector& bilinear,
                                           const Multivector& bilinear_conj, Signature sig, int mu,
                                           double tol = 1e-8);

// Forms attached to a five-dimensional bilinear square theta_1 ^ theta_2:
// vartheta = *(re t1 ^ im t1 ^ re t2 ^ im t2) and the three real two-forms varpi_i.
struct SU2Tuple {
  Multivector vartheta;
  Multivector varpi1, varpi2, varpi3;
};
SU2Tuple su2_tuple(const Multivector& theta1, const Multivector& theta2);

Vector random_chiral_spinor(Rng& rng, const CliffordRep& rep, int mu);
// Chiral spinor fixed by the real structure (real type modules only).
Vector real_chiral_spinor(Rng& rng, const PairedModule& pm, int mu);
// xi_1 + i xi_2 with real chiral xi_i of equal bilinear norm and orthogonal, so B(eta, eta) = 0.
Vector pure_chiral_spinor(Rng& rng, const PairedModule& pm, int mu);

}  // namespace ka
