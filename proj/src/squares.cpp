#include "ka/squares.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "ka/sampling.hpp"

namespace ka {

namespace {

Multivector adjoint_involution(const Multivector& a, int s) {
  Multivector t = reversion(a);
  return s == 1 ? t : parity(t);
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : num; }

const Pairing& pairing_for(const PairedModule& pm, PairingKind kind) {
  return kind == PairingKind::hermitian ? pm.hermitian : pm.bilinear;
}

}  // namespace

double VerificationReport::worst() const {
  double w = 0.0;
  for (const auto& [k, v] : residuals) w = std::max(w, std::isnan(v) ? INFINITY : v);
  return w;
}

void VerificationReport::finalize() { passed = worst() < tol; }

double module_scale(const CliffordRep& rep) { return double(rep.dim()); }

SquareResult hermitian_square(const PairedModule& pm, const Vector& eta, cplx kappa) {
  if (eta.size() != pm.rep.dim()) throw Error("spinor has wrong length");
  if (eta.norm() == 0.0) throw Error("zero spinor has no square");
  if (std::abs(std::abs(kappa) - 1.0) > 1e-12) throw Error("kappa must have unit modulus");
  const Signature& sig = pm.rep.sig();
  const double n = module_scale(pm.rep);
  Vector geta = pm.hermitian.gram.adjoint() * eta;  // so that geta^dagger x = eta^dagger G x
  Multivector a(sig);
  for (Blade b = 0; b <= sig.volume_mask(); ++b) {
    if (!pm.rep.basis_blade(b)) continue;
    Vector x = pm.rep.blade_inverse(b) * eta;
    a.set(b, kappa * geta.dot(x) / n);
  }
  return {a.pruned(1e-15 * a.max_abs()), PairingKind::hermitian, kappa};
}

SquareResult bilinear_square(const PairedModule& pm, const Vector& eta) {
  if (eta.size() != pm.rep.dim()) throw Error("spinor has wrong length");
  if (eta.norm() == 0.0) throw Error("zero spinor has no square");
  const Signature& sig = pm.rep.sig();
  const double n = module_scale(pm.rep);
  Eigen::RowVectorXcd row = eta.transpose() * pm.bilinear.gram;
  Multivector a(sig);
  for (Blade b = 0; b <= sig.volume_mask(); ++b) {
    if (!pm.rep.basis_blade(b)) continue;
    a.set(b, (row * (pm.rep.blade_inverse(b) * eta))(0, 0) / n);
  }
  return {a.pruned(1e-15 * a.max_abs()), PairingKind::bilinear, 1.0};
}

SquareResult square(const PairedModule& pm, const Vector& eta, PairingKind kind, cplx kappa) {
  return kind == PairingKind::hermitian ? hermitian_square(pm, eta, kappa) : bilinear_square(pm, eta);
}

Multivector square_by_dequantization(const PairedModule& pm, const Vector& eta, PairingKind kind, cplx kappa) {
  Matrix e = kind == PairingKind::hermitian ? Matrix(kappa * eta * eta.adjoint() * pm.hermitian.gram)
                                             : Matrix(eta * eta.transpose() * pm.bilinear.gram);
  return pm.rep.dequantize(e);
}

Multivector find_witness_beta(const Multivector& alpha, const CliffordRep& rep) {
  const Signature& sig = alpha.sig();
  const double n2 = alpha.norm() * alpha.norm();
  if (n2 == 0.0) throw Error("zero form has no witness");
  auto good = [&](const Multivector& beta) {
    return std::abs(algebra_product(rep, alpha, beta).scalar_part()) > 1e-8 * n2 * std::max(1.0, beta.norm());
  };
  Multivector one = Multivector::scalar(sig, 1.0);
  if (good(one)) return one;
  Multivector c = conj(alpha);
  if (rep.odd()) c = project_lower(c);
  if (!c.empty() && good(c)) return c;
  for (int k = 1; k <= sig.d(); ++k)
    for (Blade b = 1; b <= sig.volume_mask(); ++b) {
      if (grade_of(b) != k || !rep.basis_blade(b)) continue;
      Multivector e = Multivector::blade(sig, b);
      if (good(e)) return e;
    }
  throw Error("no witness form found");
}

VerificationReport verify_square(const SquareResult& sq, const PairedModule& pm, const VerifyOptions& opt) {
  const CliffordRep& rep = pm.rep;
  const Multivector& a = sq.alpha;
  if (a.sig() != rep.sig()) throw Error("verify_square: signature mismatch");
  VerificationReport rep_out;
  rep_out.tol = opt.tol;
  const double n = module_scale(rep);
  const double an = a.norm();
  if (an == 0.0) {
    rep_out.residuals["nonzero"] = INFINITY;
    rep_out.finalize();
    return rep_out;
  }
  if (rep.odd()) {
    Multivector hi = a - project_lower(a);
    rep_out.residuals["truncation"] = hi.norm() / an;
  }
  Multivector at = rep.odd() ? project_lower(a) : a;
  auto prod = [&](const Multivector& x, const Multivector& y) { return algebra_product(rep, x, y); };
  rep_out.residuals["quadratic"] = distance(prod(at, at), n * at.scalar_part() * at) / (an * an);
  if (sq.kind == PairingKind::hermitian) {
    Multivector lhs = adjoint_involution(std::conj(sq.kappa) * at, pm.hermitian.adjoint);
    rep_out.residuals["involution"] = distance(lhs, sq.kappa * conj(at)) / an;
  } else {
    Multivector lhs = adjoint_involution(at, pm.bilinear.adjoint);
    rep_out.residuals["involution"] = distance(lhs, double(pm.bilinear.symmetry) * at) / an;
  }
  Multivector beta = opt.beta ? *opt.beta : find_witness_beta(at, rep);
  rep_out.witness = beta;
  {
    Multivector ab = prod(at, beta);
    if (std::abs(ab.scalar_part()) <= 1e-8 * an * an * std::max(1.0, beta.norm()))
      rep_out.residuals["witness_nondegenerate"] = INFINITY;
    Multivector aba = prod(ab, at);
    rep_out.residuals["witness"] = distance(aba, n * ab.scalar_part() * at) / (an * an * std::max(beta.norm(), 1e-300));
  }
  if (opt.sampled_betas > 0) {
    Rng rng(opt.seed);
    double worst = 0.0;
    for (int t = 0; t < opt.sampled_betas; ++t) {
      Multivector b = random_form(rng, rep.sig());
      if (rep.odd()) b = project_lower(b);
      Multivector ab = prod(at, b);
      worst = std::max(worst, distance(prod(ab, at), n * ab.scalar_part() * at) / (an * an * b.norm()));
    }
    rep_out.residuals["witness_sampled"] = worst;
  }
  if (opt.mu) {
    if (rep.odd()) throw Error("chirality equation requires even dimension");
    const Signature& s = rep.sig();
    cplx ph = std::pow(cplx(0, 1), (s.q + s.d() / 2) % 4);
    Multivector lhs = ph * hodge_star(parity(reversion(at)));
    rep_out.residuals["chirality"] = distance(lhs, double(*opt.mu) * at) / an;
  }
  rep_out.finalize();
  return rep_out;
}

Vector reconstruct_spinor(const SquareResult& sq, const PairedModule& pm) {
  Matrix e = pm.rep.quantize(sq.alpha);
  Matrix m = sq.kind == PairingKind::hermitian ? Matrix(e * pm.hermitian.gram.inverse() / sq.kappa)
                                                : Matrix(e * pm.bilinear.gram.inverse());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) throw Error("square is zero");
  if (sv.size() > 1 && sv(1) > 1e-8 * sv(0)) throw Error("square does not quantize to a rank-one endomorphism");
  Vector u = svd.matrixU().col(0);
  if (sq.kind == PairingKind::hermitian) {
    cplx lam = u.dot(m * u);
    if (lam.real() <= 0.0) throw Error("Hermitian square has the wrong sign for the given kappa");
    return u * std::sqrt(lam.real());
  }
  cplx t2 = u.dot(m * u.conjugate());
  return u * std::sqrt(t2);
}

int conjugate_square_sign(const PairedModule& pm) { return predicted_invariance_sign(pm.rep.sig(), pm.hermitian.adjoint); }

VerificationReport conjugate_square_check(const SquareResult& sq_eta, const SquareResult& sq_keta, const PairedModule& pm,
                                          double tol) {
  if (sq_eta.kind != sq_keta.kind) throw Error("conjugate_square_check: squares of different kinds");
  VerificationReport out;
  out.tol = tol;
  const double c = conjugate_square_sign(pm);
  Multivector expect = conj(sq_eta.alpha);
  if (pm.k.type == StructureType::twisted) expect = parity(expect);
  expect *= c;
  if (sq_eta.kind == PairingKind::hermitian) expect *= sq_eta.kappa / std::conj(sq_eta.kappa);
  out.residuals["conjugate"] = safe_ratio(distance(sq_keta.alpha, expect), sq_eta.alpha.norm());
  out.finalize();
  return out;
}

VerificationReport compatibility_check(const SquareResult& hermitian, const SquareResult& bilinear,
                                       const SquareResult& bilinear_conj, const PairedModule& pm,
                                       std::optional<Multivector> beta, double tol) {
  const CliffordRep& rep = pm.rep;
  VerificationReport out;
  out.tol = tol;
  auto prod = [&](const Multivector& x, const Multivector& y) { return algebra_product(rep, x, y); };
  Multivector ah = rep.odd() ? project_lower(hermitian.alpha) : hermitian.alpha;
  Multivector ab = rep.odd() ? project_lower(bilinear.alpha) : bilinear.alpha;
  Multivector ak = rep.odd() ? project_lower(bilinear_conj.alpha) : bilinear_conj.alpha;
  Multivector b = beta ? *beta : find_witness_beta(ah, rep);
  out.witness = b;
  const double n = module_scale(rep);
  Multivector hb = prod(ah, b);
  double bn = std::max(b.norm(), 1e-300);
  out.residuals["same_spinor"] =
      safe_ratio(distance(prod(hb, ab), n * hb.scalar_part() * ab), ah.norm() * bn * ab.norm());
  Multivector lhs = prod(prod(ab, b), ak);
  cplx kb = std::conj(hermitian.kappa);
  cplx coeff = n * double(pm.bilinear.symmetry) * kb * kb * prod(ah, adjoint_involution(b, pm.bilinear.adjoint)).scalar_part();
  out.residuals["conjugate_pair"] = safe_ratio(distance(lhs, coeff * ah), ab.norm() * bn * ak.norm());
  out.finalize();
  return out;
}

double constrained_check(const Multivector& q, const Multivector& alpha, const CliffordRep& rep) {
  if (q.empty()) return 0.0;
  Multivector qq = rep.odd() ? push_truncated(q, rep.ell()) : q;
  Multivector aa = rep.odd() ? project_lower(alpha) : alpha;
  return safe_ratio(algebra_product(rep, qq, aa).norm(), qq.norm() * aa.norm());
}

Matrix bivector_rotation(const Multivector& b) {
  const Signature& sig = b.sig();
  const int d = sig.d();
  Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    Multivector e = Multivector::basis(sig, i);
    Multivector ad = geometric_product(b, e) - geometric_product(e, b);
    a.col(i) = ad.one_form_coeffs();
  }
  return a.exp();
}

double equivariance_check(const Vector& eta, const Multivector& b, cplx z, const PairedModule& pm, PairingKind kind) {
  for (const auto& [bl, c] : b.terms())
    if (grade_of(bl) != 2) throw Error("equivariance_check expects a bivector");
  Matrix u = pm.rep.quantize(b).exp();
  Vector g_eta = z * (u * eta);
  Multivector lhs = square(pm, g_eta, kind).alpha;
  Multivector base = square(pm, eta, kind).alpha;
  Multivector rhs = outermorphism(bivector_rotation(b), base);
  if (pm.rep.odd()) rhs = project_lower(rhs);
  if (kind == PairingKind::bilinear) rhs *= z * z;
  return safe_ratio(distance(lhs, rhs), base.norm());
}

}  // namespace ka
