#pragma once

#include <string>

#include "ka/clifford_rep.hpp"

namespace ka {

enum class PairingKind { hermitian, bilinear };

std::string to_string(PairingKind k);

// Hermitian: pairing(xi, chi) = chi^dagger G xi. Bilinear: chi^T G xi.
struct Pairing {
  Matrix gram;
  PairingKind kind = PairingKind::hermitian;
  int adjoint = 1;
  // Bilinear: G^T = symmetry * G. Hermitian: +1 when G is Hermitian.
  int symmetry = 1;

  cplx operator()(const Vector& xi, const Vector& chi) const;
};

enum class StructureType { real, quaternionic, twisted };

std::string to_string(StructureType t);

// xi -> C conj(xi), with (C conj)^2 = epsilon Id.
struct AntiLinearMap {
  Matrix c;
  int epsilon = 1;
  StructureType type = StructureType::real;

  Vector operator()(const Vector& xi) const { return c * xi.conjugate(); }
};

// Real, quaternionic or twisted (p - q = 3, 7 mod 8) type and the sign of the square.
StructureType structure_type(Signature sig);
int structure_epsilon(Signature sig);

// Hermitian inner product averaged over the finite Clifford group.
Matrix averaged_inner_product(const CliffordRep& rep);

AntiLinearMap build_structure(const CliffordRep& rep);

// Adjoint type forced on the Hermitian pairing in odd dimension.
int odd_hermitian_adjoint(Signature sig);

// s = 0 selects the default: +1 in even dimension, the forced value in odd dimension.
Pairing build_hermitian(const CliffordRep& rep, const AntiLinearMap& k, int s = 0);
Pairing build_hermitian(const CliffordRep& rep, int s = 0);
Pairing build_bilinear(const CliffordRep& rep, const AntiLinearMap& k, const Pairing& hermitian);
Pairing build_bilinear(const CliffordRep& rep, int s = 0);

// Largest relative violation of the admissibility relation on the generators.
double admissibility_residual(const Pairing& pairing, const CliffordRep& rep, int s);

struct PairingTypes {
  int adjoint = 0;
  int symmetry = 0;
};
PairingTypes classify(const Pairing& pairing, const CliffordRep& rep, double tol = 1e-10);

// K with S(xi, chi) = B(xi, K chi).
AntiLinearMap compatibility_map(const Pairing& hermitian, const Pairing& bilinear);

// Sign c with S(K xi, K chi) = c conj(S(xi, chi)).
int measured_invariance_sign(const Pairing& hermitian, const AntiLinearMap& k);
// Sign predicted for a compatible pairing of adjoint type s.
int predicted_invariance_sign(Signature sig, int s);

// Bundle of the objects every square computation needs.
struct PairedModule {
  CliffordRep rep;
  AntiLinearMap structure;
  Pairing hermitian;
  Pairing bilinear;
  AntiLinearMap k;

  int s() const { return hermitian.adjoint; }
  int sigma() const { return bilinear.symmetry; }
  int s_bilinear() const { return bilinear.adjoint; }
};

PairedModule build_paired(Signature sig, int ell = 1, int s = 0);
const PairedModule& cached_paired(Signature sig, int ell = 1, int s = 0);

// Expected (adjoint, symmetry) of the bilinear pairing as tabulated for each residue class.
PairingTypes tabulated_bilinear_types(Signature sig, int s);
// Tabulated Hermitian adjoint type in odd dimension.
int tabulated_odd_hermitian_adjoint(Signature sig);

}  // namespace ka
