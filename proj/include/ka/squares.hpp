#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ka/pairings.hpp"

namespace ka {

struct SquareResult {
  Multivector alpha;
  PairingKind kind = PairingKind::hermitian;
  cplx kappa = 1.0;
};

struct VerificationReport {
  bool passed = false;
  std::map<std::string, double> residuals;
  Multivector witness;
  double tol = 1e-9;

  double worst() const;
  // Recomputes passed from the residuals and tolerance.
  void finalize();
};

struct VerifyOptions {
  double tol = 1e-9;
  std::optional<Multivector> beta;
  std::optional<int> mu;
  // Extra random witnesses checked against the quadratic-in-alpha identity.
  int sampled_betas = 0;
  std::uint64_t seed = 0;
};

// 2^{floor(d/2)}
double module_scale(const CliffordRep& rep);

SquareResult hermitian_square(const PairedModule& pm, const Vector& eta, cplx kappa = 1.0);
SquareResult bilinear_square(const PairedModule& pm, const Vector& eta);
SquareResult square(const PairedModule& pm, const Vector& eta, PairingKind kind, cplx kappa = 1.0);
// Same squares obtained by dequantizing the rank-one endomorphism.
Multivector square_by_dequantization(const PairedModule& pm, const Vector& eta, PairingKind kind, cplx kappa = 1.0);

Multivector find_witness_beta(const Multivector& alpha, const CliffordRep& rep);

VerificationReport verify_square(const SquareResult& sq, const PairedModule& pm, const VerifyOptions& opt = {});

// Unique up to phase (Hermitian) or sign (bilinear).
Vector reconstruct_spinor(const SquareResult& sq, const PairedModule& pm);

// Sign relating the square of K eta to the conjugate square of eta.
int conjugate_square_sign(const PairedModule& pm);
VerificationReport conjugate_square_check(const SquareResult& sq_eta, const SquareResult& sq_keta, const PairedModule& pm,
                                          double tol = 1e-9);

VerificationReport compatibility_check(const SquareResult& hermitian, const SquareResult& bilinear,
                                       const SquareResult& bilinear_conj, const PairedModule& pm,
                                       std::optional<Multivector> beta = std::nullopt, double tol = 1e-9);

// |q . alpha| relative to |q| |alpha|; zero exactly when quantize(q) kills the spinor.
double constrained_check(const Multivector& q, const Multivector& alpha, const CliffordRep& rep);

// Rotation of one-forms induced by conjugation with exp(b) for a bivector b.
Matrix bivector_rotation(const Multivector& b);
double equivariance_check(const Vector& eta, const Multivector& b, cplx z, const PairedModule& pm, PairingKind kind);

}  // namespace ka
