#include "ka/pairings.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace ka {

namespace {

const cplx kI(0.0, 1.0);

cplx ipow(int n) {
  static const cplx table[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return table[((n % 4) + 4) % 4];
}

int mod(int a, int n) { return ((a % n) + n) % n; }

int sign_pow(int e) { return (mod(e, 2) == 0) ? 1 : -1; }

int binom2(int n) { return n * (n - 1) / 2; }

Matrix normalized(const Matrix& g) {
  Eigen::JacobiSVD<Matrix> svd(g);
  return g / svd.singularValues()(0);
}

Matrix volume_part(const CliffordRep& rep, bool plus) {
  const Signature& sig = rep.sig();
  Blade b = plus ? ((Blade(1) << sig.p) - 1u) : (sig.volume_mask() & ~((Blade(1) << sig.p) - 1u));
  return rep.blade_op(b);
}

}  // namespace

std::string to_string(PairingKind k) { return k == PairingKind::hermitian ? "hermitian" : "bilinear"; }

std::string to_string(StructureType t) {
  switch (t) {
    case StructureType::real:
      return "real";
    case StructureType::quaternionic:
      return "quaternionic";
    default:
      return "twisted";
  }
}

cplx Pairing::operator()(const Vector& xi, const Vector& chi) const {
  if (kind == PairingKind::hermitian) return chi.dot(gram * xi);
  return (chi.transpose() * gram * xi)(0, 0);
}

StructureType structure_type(Signature sig) {
  switch (mod(sig.p - sig.q, 8)) {
    case 0:
    case 1:
    case 2:
      return StructureType::real;
    case 4:
    case 5:
    case 6:
      return StructureType::quaternionic;
    default:
      return StructureType::twisted;
  }
}

int structure_epsilon(Signature sig) {
  switch (mod(sig.p - sig.q, 8)) {
    case 0:
    case 1:
    case 2:
    case 7:
      return 1;
    default:
      return -1;
  }
}

Matrix averaged_inner_product(const CliffordRep& rep) {
  const int n = rep.dim();
  Matrix g = Matrix::Zero(n, n);
  for (Blade b = 0; b <= rep.sig().volume_mask(); ++b) g += rep.blade_op(b).adjoint() * rep.blade_op(b);
  g /= double(rep.sig().blade_count());
  return 0.5 * (g + g.adjoint());
}

AntiLinearMap build_structure(const CliffordRep& rep) {
  const int n = rep.dim();
  const StructureType type = structure_type(rep.sig());
  const double twist = type == StructureType::twisted ? -1.0 : 1.0;
  // Solutions of gamma^i C = twist * C conj(gamma^i) are the fixed points of the
  // average over the Clifford group of X -> twist^|I| gamma^I X conj(gamma^I)^{-1}.
  // Averaging a few fixed probe matrices spans the solution space.
  constexpr int probes = 3;
  Matrix basis(n * n, probes);
  for (int t = 0; t < probes; ++t) {
    Matrix x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = cplx(std::cos(1.0 + 0.37 * i + 1.91 * j + 2.3 * t), std::sin(0.5 + 1.13 * i * j + 0.71 * t));
    Matrix avg = Matrix::Zero(n, n);
    for (Blade b = 0; b <= rep.sig().volume_mask(); ++b) {
      double w = (grade_of(b) % 2 == 1) ? twist : 1.0;
      avg += w * rep.blade_op(b) * x * rep.blade_inverse(b).conjugate();
    }
    basis.col(t) = Eigen::Map<const Vector>(avg.data(), n * n);
  }
  Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  if (rank != 1) throw Error("anti-linear structure solution space has dimension " + std::to_string(rank));
  basis = svd.matrixU().leftCols(1);
  Matrix c = Eigen::Map<const Matrix>(basis.col(0).data(), n, n);
  Matrix sq = c * c.conjugate();
  cplx lambda = sq.trace() / double(n);
  if ((sq - lambda * Matrix::Identity(n, n)).norm() > 1e-8 * std::abs(lambda) * n)
    throw Error("anti-linear structure does not square to a multiple of the identity");
  c /= std::sqrt(std::abs(lambda));
  // fix the irrelevant phase so the largest entry is real positive
  Eigen::Index r, col;
  c.cwiseAbs().maxCoeff(&r, &col);
  c *= std::abs(c(r, col)) / c(r, col);
  AntiLinearMap out;
  out.c = c;
  out.epsilon = lambda.real() > 0 ? 1 : -1;
  out.type = type;
  return out;
}

int odd_hermitian_adjoint(Signature sig) { return sign_pow(sig.p - 1); }

Pairing build_hermitian(const CliffordRep& rep, const AntiLinearMap& k, int s) {
  const Signature& sig = rep.sig();
  Matrix g0 = averaged_inner_product(rep);
  Matrix g1 = 0.5 * (g0 + k.c.transpose() * g0.conjugate() * k.c.conjugate());
  Matrix g;
  if (rep.odd()) {
    int forced = odd_hermitian_adjoint(sig);
    if (s != 0 && s != forced) throw Error("adjoint type is forced to " + std::to_string(forced) + " in signature " + sig.str());
    s = forced;
    g = ipow(binom2(sig.p)) * g1 * volume_part(rep, true);
  } else {
    if (s == 0) s = 1;
    if (s != 1 && s != -1) throw Error("adjoint type must be +1 or -1");
    bool use_plus = (s == 1) == (sig.p % 2 == 1);
    if (use_plus)
      g = ipow(binom2(sig.p)) * g1 * volume_part(rep, true);
    else
      g = ipow(sig.q * (sig.q + 1) / 2) * g1 * volume_part(rep, false);
  }
  Pairing out;
  out.gram = normalized(g);
  out.kind = PairingKind::hermitian;
  PairingTypes t = classify(out, rep);
  if (t.adjoint != s) throw Error("constructed Hermitian pairing has unexpected adjoint type");
  out.adjoint = t.adjoint;
  out.symmetry = t.symmetry;
  return out;
}

Pairing build_hermitian(const CliffordRep& rep, int s) { return build_hermitian(rep, build_structure(rep), s); }

Pairing build_bilinear(const CliffordRep& rep, const AntiLinearMap& k, const Pairing& hermitian) {
  if (hermitian.kind != PairingKind::hermitian) throw Error("build_bilinear expects a Hermitian pairing");
  Pairing out;
  out.kind = PairingKind::bilinear;
  out.gram = normalized(k.c.adjoint() * hermitian.gram);
  PairingTypes t = classify(out, rep);
  out.adjoint = t.adjoint;
  out.symmetry = t.symmetry;
  return out;
}

Pairing build_bilinear(const CliffordRep& rep, int s) {
  AntiLinearMap k = build_structure(rep);
  return build_bilinear(rep, k, build_hermitian(rep, k, s));
}

double admissibility_residual(const Pairing& pairing, const CliffordRep& rep, int s) {
  double worst = 0.0;
  const Matrix& g = pairing.gram;
  for (const auto& gi : rep.gammas()) {
    Matrix adj = pairing.kind == PairingKind::hermitian ? Matrix(gi.adjoint()) : Matrix(gi.transpose());
    worst = std::max(worst, (g * gi - double(s) * adj * g).norm() / g.norm());
  }
  return worst;
}

PairingTypes classify(const Pairing& pairing, const CliffordRep& rep, double tol) {
  PairingTypes t;
  double rp = admissibility_residual(pairing, rep, 1);
  double rm = admissibility_residual(pairing, rep, -1);
  if (rp < tol)
    t.adjoint = 1;
  else if (rm < tol)
    t.adjoint = -1;
  else
    throw Error("pairing is not admissible");
  const Matrix& g = pairing.gram;
  Matrix other = pairing.kind == PairingKind::hermitian ? Matrix(g.adjoint()) : Matrix(g.transpose());
  if ((other - g).norm() < tol * g.norm())
    t.symmetry = 1;
  else if ((other + g).norm() < tol * g.norm())
    t.symmetry = -1;
  else
    throw Error("pairing has no definite symmetry type");
  return t;
}

AntiLinearMap compatibility_map(const Pairing& hermitian, const Pairing& bilinear) {
  if (hermitian.kind != PairingKind::hermitian || bilinear.kind != PairingKind::bilinear)
    throw Error("compatibility_map expects a Hermitian and a bilinear pairing");
  const int n = int(hermitian.gram.rows());
  Matrix c = (hermitian.gram * bilinear.gram.inverse()).transpose();
  Matrix sq = c * c.conjugate();
  cplx lambda = sq.trace() / double(n);
  if ((sq - lambda * Matrix::Identity(n, n)).norm() > 1e-8 * std::abs(lambda) * n ||
      std::abs(lambda.imag()) > 1e-8 * std::abs(lambda))
    throw Error("compatibility map does not square to a real multiple of the identity");
  AntiLinearMap out;
  out.c = c;
  out.epsilon = lambda.real() > 0 ? 1 : -1;
  out.type = out.epsilon > 0 ? StructureType::real : StructureType::quaternionic;
  return out;
}

int measured_invariance_sign(const Pairing& hermitian, const AntiLinearMap& k) {
  const Matrix& g = hermitian.gram;
  Matrix lhs = k.c.adjoint() * g * k.c;
  Matrix rhs = g.conjugate();
  if ((lhs - rhs).norm() < 1e-8 * rhs.norm()) return 1;
  if ((lhs + rhs).norm() < 1e-8 * rhs.norm()) return -1;
  throw Error("Hermitian pairing is not compatible with the anti-linear map");
}

int predicted_invariance_sign(Signature sig, int s) {
  const int p = sig.p, d = sig.d();
  if (d % 2 == 0) {
    int e = binom2(p) + ((s * sign_pow(p) == 1) ? d / 2 : 0);
    return sign_pow(e);
  }
  if (structure_type(sig) == StructureType::twisted) return sign_pow((p + 1) * p / 2);
  return sign_pow(binom2(p));
}

PairedModule build_paired(Signature sig, int ell, int s) {
  PairedModule pm{CliffordRep::build(sig, ell), {}, {}, {}, {}};
  pm.structure = build_structure(pm.rep);
  pm.hermitian = build_hermitian(pm.rep, pm.structure, s);
  pm.bilinear = build_bilinear(pm.rep, pm.structure, pm.hermitian);
  pm.k = compatibility_map(pm.hermitian, pm.bilinear);
  pm.k.type = pm.structure.type;
  return pm;
}

const PairedModule& cached_paired(Signature sig, int ell, int s) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, std::unique_ptr<PairedModule>> cache;
  if (sig.d() % 2 == 0) ell = 1;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(sig.p, sig.q, ell, s);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<PairedModule>(build_paired(sig, ell, s))).first;
  return *it->second;
}

PairingTypes tabulated_bilinear_types(Signature sig, int s) {
  const int p4 = mod(sig.p, 4);
  const int r8 = mod(sig.p - sig.q, 8);
  constexpr int Sym = 1, Skew = -1, Pos = 1, Neg = -1;
  if (sig.d() % 2 == 0) {
    // rows p mod 4, columns (d mod 4 = 0: B+, B-), (d mod 4 = 2: B+, B-)
    static const int table[4][2][2] = {
        {{Sym, Sym}, {Skew, Sym}},
        {{Sym, Sym}, {Sym, Skew}},
        {{Skew, Skew}, {Sym, Skew}},
        {{Skew, Skew}, {Skew, Sym}},
    };
    int col = mod(sig.d(), 4) == 0 ? 0 : 1;
    int sym = table[p4][col][s == 1 ? 0 : 1];
    if (r8 == 4 || r8 == 6) sym = -sym;
    return {s, sym};
  }
  static const int t1[4][2] = {{Neg, Sym}, {Pos, Sym}, {Neg, Skew}, {Pos, Skew}};
  static const int t5[4][2] = {{Neg, Skew}, {Pos, Skew}, {Neg, Sym}, {Pos, Sym}};
  static const int t3[4][2] = {{Pos, Skew}, {Neg, Sym}, {Pos, Sym}, {Neg, Skew}};
  static const int t7[4][2] = {{Pos, Sym}, {Neg, Skew}, {Pos, Skew}, {Neg, Sym}};
  const int(*t)[2] = r8 == 1 ? t1 : r8 == 5 ? t5 : r8 == 3 ? t3 : t7;
  return {t[p4][0], t[p4][1]};
}

int tabulated_odd_hermitian_adjoint(Signature sig) {
  static const int row[4] = {-1, 1, -1, 1};
  return row[mod(sig.p, 4)];
}

}  // namespace ka
