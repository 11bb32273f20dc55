#include "ka/multivector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace ka {

Signature::Signature(int p_, int q_) : p(p_), q(q_) {
  if (p < 0 || q < 0) throw Error("signature entries must be non-negative");
  if (p + q < 1) throw Error("dimension must be at least one");
  if (p + q > kMaxDim) throw Error("dimension exceeds supported maximum");
}

int Signature::blade_metric(Blade b) const {
  // bits at positions >= p are timelike
  Blade timelike = b >> p;
  return (std::popcount(timelike) & 1) ? -1 : 1;
}

std::string Signature::str() const {
  return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

int grade_of(Blade b) { return std::popcount(b); }

int reorder_sign(Blade a, Blade b) {
  a >>= 1;
  int swaps = 0;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

int blade_product_sign(const Signature& sig, Blade a, Blade b) {
  return reorder_sign(a, b) * sig.blade_metric(a & b);
}

Multivector Multivector::scalar(Signature sig, cplx c) {
  Multivector m(sig);
  m.add(0, c);
  return m;
}

Multivector Multivector::blade(Signature sig, Blade b, cplx c) {
  if (b > sig.volume_mask()) throw Error("blade index outside signature");
  Multivector m(sig);
  m.add(b, c);
  return m;
}

Multivector Multivector::basis(Signature sig, int i, cplx c) {
  if (i < 0 || i >= sig.d()) throw Error("basis index out of range");
  return blade(sig, Blade(1) << i, c);
}

Multivector Multivector::one_form(Signature sig, const Eigen::VectorXcd& comps) {
  if (comps.size() != sig.d()) throw Error("one-form length does not match dimension");
  Multivector m(sig);
  for (int i = 0; i < sig.d(); ++i) m.add(Blade(1) << i, comps(i));
  return m;
}

Multivector Multivector::volume(Signature sig) { return blade(sig, sig.volume_mask()); }

cplx Multivector::coeff(Blade b) const {
  auto it = terms_.find(b);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

void Multivector::add(Blade b, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.emplace(b, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

void Multivector::set(Blade b, cplx c) {
  if (c == cplx(0.0))
    terms_.erase(b);
  else
    terms_[b] = c;
}

Multivector Multivector::grade(int k) const {
  Multivector out(sig_);
  for (const auto& [b, c] : terms_)
    if (grade_of(b) == k) out.terms_.emplace(b, c);
  return out;
}

Multivector Multivector::truncated(int k) const {
  Multivector out(sig_);
  for (const auto& [b, c] : terms_)
    if (grade_of(b) <= k) out.terms_.emplace(b, c);
  return out;
}

std::vector<int> Multivector::grades(double tol) const {
  std::vector<double> norms(sig_.d() + 1, 0.0);
  for (const auto& [b, c] : terms_) norms[grade_of(b)] += std::norm(c);
  std::vector<int> out;
  for (int k = 0; k <= sig_.d(); ++k)
    if (std::sqrt(norms[k]) > tol) out.push_back(k);
  return out;
}

Eigen::VectorXcd Multivector::one_form_coeffs() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(sig_.d());
  for (int i = 0; i < sig_.d(); ++i) v(i) = coeff(Blade(1) << i);
  return v;
}

double Multivector::norm() const {
  double s = 0.0;
  for (const auto& [b, c] : terms_) s += std::norm(c);
  return std::sqrt(s);
}

double Multivector::max_abs() const {
  double m = 0.0;
  for (const auto& [b, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

Multivector Multivector::pruned(double abs_tol) const {
  Multivector out(sig_);
  for (const auto& [b, c] : terms_)
    if (std::abs(c) > abs_tol) out.terms_.emplace(b, c);
  return out;
}

void require_same_sig(const Multivector& a, const Multivector& b) {
  if (a.sig() != b.sig())
    throw Error("signature mismatch: " + a.sig().str() + " vs " + b.sig().str());
}

Multivector& Multivector::operator+=(const Multivector& o) {
  require_same_sig(*this, o);
  for (const auto& [b, c] : o.terms_) add(b, c);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  require_same_sig(*this, o);
  for (const auto& [b, c] : o.terms_) add(b, -c);
  return *this;
}

Multivector& Multivector::operator*=(cplx c) {
  if (c == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [b, v] : terms_) v *= c;
  return *this;
}

std::string Multivector::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    if (b == 0) continue;
    os << "*e";
    bool sep = false;
    for (int i = 0; i < sig_.d(); ++i)
      if (b & (Blade(1) << i)) {
        os << (sep ? "^" : "") << (i + 1);
        sep = true;
      }
  }
  return os.str();
}

double distance(const Multivector& a, const Multivector& b) { return (a - b).norm(); }

namespace {

using Accumulator = std::vector<cplx>;

Multivector collect(const Signature& sig, const Accumulator& acc, double tol) {
  Multivector out(sig);
  for (std::size_t b = 0; b < acc.size(); ++b)
    if (std::abs(acc[b]) > tol) out.set(Blade(b), acc[b]);
  return out;
}

double prune_tol(const Multivector& a, const Multivector& b) {
  return 1e-14 * a.max_abs() * b.max_abs();
}

// Ordered contraction iota_{e_{s1}} ... iota_{e_{sk}} of the blade e^A, s1 < ... < sk.
// Returns 0 when S is not contained in A.
int contract_blade(Blade s, Blade a, Blade& out) {
  if ((s & a) != s) return 0;
  int sign = 1;
  Blade cur = a;
  // innermost contraction uses the largest index
  for (int i = kMaxDim - 1; i >= 0; --i) {
    if (!(s & (Blade(1) << i))) continue;
    Blade below = cur & ((Blade(1) << i) - 1u);
    if (std::popcount(below) & 1) sign = -sign;
    cur &= ~(Blade(1) << i);
  }
  out = cur;
  return sign;
}

}  // namespace

Multivector wedge(const Multivector& a, const Multivector& b) {
  require_same_sig(a, b);
  Accumulator acc(a.sig().blade_count(), cplx(0.0));
  for (const auto& [ba, ca] : a.terms())
    for (const auto& [bb, cb] : b.terms()) {
      if (ba & bb) continue;
      acc[ba | bb] += double(reorder_sign(ba, bb)) * ca * cb;
    }
  return collect(a.sig(), acc, prune_tol(a, b));
}

Multivector interior_basis(int i, const Multivector& a) {
  Multivector out(a.sig());
  const Blade bit = Blade(1) << i;
  for (const auto& [b, c] : a.terms()) {
    if (!(b & bit)) continue;
    int sign = (std::popcount(b & (bit - 1u)) & 1) ? -1 : 1;
    out.add(b & ~bit, double(sign) * c);
  }
  return out;
}

Multivector interior(const Multivector& v, const Multivector& a) {
  require_same_sig(v, a);
  for (const auto& [b, c] : v.terms())
    if (grade_of(b) != 1) throw Error("interior product requires a one-form");
  Multivector out(a.sig());
  for (const auto& [b, c] : v.terms()) {
    int i = std::countr_zero(b);
    out += interior_basis(i, a) * (c * double(a.sig().metric(i)));
  }
  return out;
}

Multivector generalized_product(const Multivector& a, const Multivector& b, int k) {
  require_same_sig(a, b);
  if (k < 0) throw Error("generalized product order must be non-negative");
  const Signature& sig = a.sig();
  Accumulator acc(sig.blade_count(), cplx(0.0));
  // Terms of the contraction sum with index set S survive the wedge only when
  // S is the full overlap of the two blades.
  for (const auto& [ba, ca] : a.terms())
    for (const auto& [bb, cb] : b.terms()) {
      Blade s = ba & bb;
      if (grade_of(s) != k) continue;
      Blade ra = 0, rb = 0;
      int sa = contract_blade(s, ba, ra);
      int sb = contract_blade(s, bb, rb);
      int sign = sa * sb * sig.blade_metric(s) * reorder_sign(ra, rb);
      acc[ra | rb] += double(sign) * ca * cb;
    }
  return collect(sig, acc, prune_tol(a, b));
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  require_same_sig(a, b);
  const Signature& sig = a.sig();
  Accumulator acc(sig.blade_count(), cplx(0.0));
  for (const auto& [ba, ca] : a.terms())
    for (const auto& [bb, cb] : b.terms())
      acc[ba ^ bb] += double(blade_product_sign(sig, ba, bb)) * ca * cb;
  return collect(sig, acc, prune_tol(a, b));
}

Multivector geometric_product_expanded(const Multivector& a, const Multivector& b) {
  require_same_sig(a, b);
  Multivector out(a.sig());
  const int d = a.sig().d();
  for (int j = 0; j <= d; ++j) {
    Multivector aj = a.grade(j);
    if (aj.empty()) continue;
    for (int k = 0; k <= d; ++k) {
      int e = k * (k + 1) / 2 + j * k;
      double sign = (e & 1) ? -1.0 : 1.0;
      out += generalized_product(aj, b, k) * sign;
    }
  }
  return out;
}

Multivector parity(const Multivector& a) {
  Multivector out(a.sig());
  for (const auto& [b, c] : a.terms()) out.set(b, (grade_of(b) & 1) ? -c : c);
  return out;
}

Multivector reversion(const Multivector& a) {
  Multivector out(a.sig());
  for (const auto& [b, c] : a.terms()) {
    int k = grade_of(b);
    out.set(b, ((k * (k - 1) / 2) & 1) ? -c : c);
  }
  return out;
}

Multivector conj(const Multivector& a) {
  Multivector out(a.sig());
  for (const auto& [b, c] : a.terms()) out.set(b, std::conj(c));
  return out;
}

Multivector hodge_star(const Multivector& a) {
  return geometric_product(reversion(a), Multivector::volume(a.sig()));
}

cplx inner(const Multivector& a, const Multivector& b) {
  require_same_sig(a, b);
  cplx s = 0.0;
  for (const auto& [ba, ca] : a.terms()) {
    cplx cb = b.coeff(ba);
    if (cb != cplx(0.0)) s += double(a.sig().blade_metric(ba)) * ca * cb;
  }
  return s;
}

cplx ka_trace(const Multivector& a) {
  return std::ldexp(1.0, a.sig().d() / 2) * a.scalar_part();
}

namespace {
cplx ipow(int n) {
  static const cplx table[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return table[((n % 4) + 4) % 4];
}
}  // namespace

Multivector complex_volume(Signature sig) {
  const int d = sig.d();
  int n = (d % 2 == 0) ? sig.q + d / 2 : sig.q + (d - 1) / 2;
  return Multivector::volume(sig) * ipow(n);
}

Multivector outermorphism(const Eigen::MatrixXcd& M, const Multivector& a) {
  const Signature& sig = a.sig();
  const int d = sig.d();
  if (M.rows() != d || M.cols() != d) throw Error("outermorphism matrix has wrong shape");
  std::vector<Multivector> images(d, Multivector(sig));
  for (int i = 0; i < d; ++i) images[i] = Multivector::one_form(sig, M.col(i));
  std::map<Blade, Multivector> cache;
  cache.emplace(0, Multivector::scalar(sig, 1.0));
  auto image_of = [&](auto&& self, Blade b) -> const Multivector& {
    auto it = cache.find(b);
    if (it != cache.end()) return it->second;
    int top = std::bit_width(b) - 1;
    Multivector img = wedge(self(self, b & ~(Blade(1) << top)), images[top]);
    return cache.emplace(b, std::move(img)).first->second;
  };
  Multivector out(sig);
  for (const auto& [b, c] : a.terms()) out += image_of(image_of, b) * c;
  return out;
}

}  // namespace ka
