#include "ka/clifford_rep.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace ka {

namespace {

const cplx kI(0.0, 1.0);

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// 2k Hermitian matrices of size 2^k squaring to the identity and pairwise
// anticommuting, built as Pauli strings Z..Z X I..I and Z..Z Y I..I.
std::vector<Matrix> euclidean_gammas(int k) {
  Matrix id = Matrix::Identity(2, 2);
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;
  std::vector<Matrix> out;
  for (int j = 0; j < k; ++j) {
    for (const Matrix* mid : {&x, &y}) {
      Matrix g = Matrix::Identity(1, 1);
      for (int t = 0; t < k; ++t) {
        const Matrix& f = t < j ? z : (t == j ? *mid : id);
        g = kron(g, f);
      }
      out.push_back(g);
    }
  }
  return out;
}

cplx ipow(int n) {
  static const cplx table[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return table[((n % 4) + 4) % 4];
}

}  // namespace

CliffordRep CliffordRep::build(Signature sig, int ell) {
  const int d = sig.d();
  if (d < 1 || d > 10) throw Error("Clifford representation supports 1 <= d <= 10");
  CliffordRep rep;
  rep.sig_ = sig;
  const int k = d / 2;
  rep.n_ = 1 << k;
  std::vector<Matrix> eu = euclidean_gammas(k);
  for (int i = 0; i < 2 * k; ++i) rep.gammas_.push_back(sig.metric(i) > 0 ? eu[i] : Matrix(kI * eu[i]));
  if (d % 2 == 1) {
    if (ell != 1 && ell != -1) throw Error("ell must be +1 or -1 in odd dimension");
    Matrix prod = Matrix::Identity(rep.n_, rep.n_);
    for (int i = 0; i < 2 * k; ++i) prod = prod * rep.gammas_[i];
    // prod^2 is a multiple of the identity
    cplx sq = (prod * prod)(0, 0);
    cplx target = double(sig.metric(d - 1));
    Matrix last = prod / std::sqrt(target / sq);
    rep.gammas_.push_back(last);
    Matrix vol = Matrix::Identity(rep.n_, rep.n_);
    for (const auto& g : rep.gammas_) vol = vol * g;
    cplx lab = ipow(sig.q + k) * vol(0, 0);
    if (std::abs(lab - double(ell)) > 1e-9) rep.gammas_.back() *= -1.0;
    rep.ell_ = ell;
  } else {
    rep.ell_ = 0;
  }
  rep.blades_.resize(sig.blade_count());
  rep.blades_[0] = Matrix::Identity(rep.n_, rep.n_);
  for (Blade b = 1; b <= sig.volume_mask(); ++b) {
    int top = std::bit_width(b) - 1;
    rep.blades_[b] = rep.blades_[b & ~(Blade(1) << top)] * rep.gammas_[top];
  }
  int n_exp = (d % 2 == 0) ? sig.q + d / 2 : sig.q + k;
  rep.volume_op_ = ipow(n_exp) * rep.blades_[sig.volume_mask()];
  return rep;
}

const CliffordRep& CliffordRep::cached(Signature sig, int ell) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<CliffordRep>> cache;
  if (sig.d() % 2 == 0) ell = 0;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(sig.p, sig.q, ell);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<CliffordRep>(build(sig, ell == 0 ? 1 : ell))).first;
  return *it->second;
}

Matrix CliffordRep::quantize(const Multivector& a) const {
  if (a.sig() != sig_) throw Error("quantize: signature mismatch");
  Matrix out = Matrix::Zero(n_, n_);
  for (const auto& [b, c] : a.terms()) out += c * blades_[b];
  return out;
}

Multivector CliffordRep::dequantize(const Matrix& e) const {
  if (e.rows() != n_ || e.cols() != n_) throw Error("dequantize: matrix has wrong shape");
  Multivector out(sig_);
  double scale = 0.0;
  for (Blade b = 0; b <= sig_.volume_mask(); ++b) {
    if (!basis_blade(b)) continue;
    // Tr(E (gamma^I)^{-1}) / N
    cplx tr = (e.cwiseProduct(blades_[b].transpose())).sum() * double(blade_square(b)) / double(n_);
    out.set(b, tr);
    scale = std::max(scale, std::abs(tr));
  }
  return out.pruned(1e-15 * scale);
}

double CliffordRep::clifford_residual() const {
  double worst = 0.0;
  const int d = sig_.d();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix ac = gammas_[i] * gammas_[j] + gammas_[j] * gammas_[i];
      if (i == j) ac -= 2.0 * sig_.metric(i) * Matrix::Identity(n_, n_);
      worst = std::max(worst, ac.cwiseAbs().maxCoeff());
    }
  return worst;
}

Multivector project_ell(const Multivector& a, int ell) {
  if (a.sig().d() % 2 == 0) throw Error("project_ell requires odd dimension");
  return 0.5 * (a + double(ell) * geometric_product(complex_volume(a.sig()), a));
}

Multivector project_lower(const Multivector& a) { return a.truncated(a.sig().d() / 2); }

Multivector push_truncated(const Multivector& a, int ell) { return 2.0 * project_lower(project_ell(a, ell)); }

Multivector vee_product(const Multivector& a, const Multivector& b, int ell) {
  if (a.sig().d() % 2 == 0) throw Error("vee product requires odd dimension");
  const int m = a.sig().d() / 2;
  for (const Multivector* x : {&a, &b})
    for (const auto& [bl, c] : x->terms())
      if (grade_of(bl) > m) throw Error("vee product inputs must be truncated forms");
  return push_truncated(geometric_product(a, b), ell);
}

Multivector algebra_product(const CliffordRep& rep, const Multivector& a, const Multivector& b) {
  if (rep.odd()) return vee_product(a, b, rep.ell());
  return geometric_product(a, b);
}

Matrix chirality_projector(const CliffordRep& rep, int mu) {
  if (rep.odd()) throw Error("chirality requires even dimension");
  if (mu != 1 && mu != -1) throw Error("chirality must be +1 or -1");
  return 0.5 * (Matrix::Identity(rep.dim(), rep.dim()) + double(mu) * rep.volume_op());
}

Vector chirality_project(const CliffordRep& rep, const Vector& eta, int mu) {
  return chirality_projector(rep, mu) * eta;
}

std::optional<int> chirality_of(const CliffordRep& rep, const Vector& eta, double tol) {
  if (rep.odd()) throw Error("chirality requires even dimension");
  Vector v = rep.volume_op() * eta;
  double n = eta.norm();
  if ((v - eta).norm() <= tol * n) return 1;
  if ((v + eta).norm() <= tol * n) return -1;
  return std::nullopt;
}

}  // namespace ka
