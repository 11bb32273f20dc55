#include "ka/instanton.hpp"

#include <array>
#include <algorithm>
#include <cmath>

namespace ka {

namespace {

const cplx I(0.0, 1.0);

Multivector scalar_mv(Signature s, cplx c) { return Multivector::scalar(s, c); }

// Degree-zero part r of the Hermitian square, signed as in the square itself.
double hermitian_r(const StructureData& d) {
  auto it = d.scalars.find("r");
  if (it != d.scalars.end()) return it->second.real();
  const int dim = d.sig.d();
  switch (d.tag) {
    case StructureTag::real1form: {
      const Multivector& t = d.form("vartheta");
      return -d.mu * std::sqrt(inner(t, t).real());
    }
    case StructureTag::kahler2form: {
      const double ww = inner(d.form("omega"), d.form("omega")).real();
      if (dim == 4) return std::sqrt(ww / 2.0);
      if (dim == 5) return d.mu * std::sqrt(ww / 2.0);
      return std::sqrt(ww / 3.0);
    }
    case StructureTag::pair: {
      const double ww = inner(d.form("omega"), d.form("omega")).real();
      const double tt = inner(d.form("Theta"), d.form("Theta")).real();
      return std::sqrt((2.0 * ww + tt) / 14.0);
    }
    default:
      throw Error("structure data carries no degree-zero scale");
  }
}

Multivector theta5(const StructureData& d, double r) {
  if (d.has_form("theta")) return d.form("theta");
  const Multivector& w = d.form("omega");
  return (d.mu / (2.0 * r)) * hodge_star(wedge(w, w));
}

void require_hermitian(const StructureData& d) {
  if (d.kind != PairingKind::hermitian) throw Error("instanton and curving rows use Hermitian structure data");
}

double row_weight(const StructureData& d, ConditionCase c, int degree) {
  if (c == ConditionCase::d2 || c == ConditionCase::d6_lorentz) return 1.0;
  if (c == ConditionCase::d3 && degree == 3) return 1.0;
  return std::abs(hermitian_r(d));
}

std::vector<Blade> degree_blades(Signature sig, int k) {
  std::vector<Blade> out;
  for (Blade b = 0; b < Blade(sig.blade_count()); ++b)
    if (grade_of(b) == k) out.push_back(b);
  return out;
}

struct LorentzSplit {
  NullFrame nf;
  Multivector huv, chi, hperp, omega;
};

LorentzSplit lorentz_split(const Multivector& H, const StructureData& d) {
  const Multivector& u = d.form("u");
  Multivector v = d.has_form("v") ? d.form("v") : conjugate_oneform(u);
  LorentzSplit s{null_frame(u, v), {}, {}, {}, {}};
  Multivector huv = interior(v, interior(u, H));
  s.huv = s.nf.screen(huv);
  s.chi = s.nf.screen(wedge(huv, u) + interior(u, H));
  s.hperp = s.nf.screen(H);
  s.omega = s.nf.screen(d.form("omega"));
  return s;
}

ConditionReport make_report(const Rows& rows, double norm_x, double weight, ConditionCase c, double tol) {
  ConditionReport rep;
  rep.dimension_case = c;
  rep.tol = tol;
  for (const auto& [name, m] : rows) rep.residuals[name] = norm_x == 0.0 ? 0.0 : m.norm() / (norm_x * weight);
  rep.passed = rep.worst() <= tol;
  return rep;
}

}  // namespace

std::string to_string(ConditionCase c) {
  switch (c) {
    case ConditionCase::d2: return "d2";
    case ConditionCase::d3: return "d3";
    case ConditionCase::d4: return "d4";
    case ConditionCase::d5: return "d5";
    case ConditionCase::d6: return "d6";
    case ConditionCase::d8: return "d8";
    case ConditionCase::d6_lorentz: return "d6lorentz";
  }
  return "?";
}

ConditionCase condition_case_from_string(const std::string& s) {
  for (ConditionCase c : {ConditionCase::d2, ConditionCase::d3, ConditionCase::d4, ConditionCase::d5,
                          ConditionCase::d6, ConditionCase::d8, ConditionCase::d6_lorentz})
    if (to_string(c) == s) return c;
  throw Error("unknown case " + s);
}

ConditionCase condition_case_for(Signature sig) {
  if (sig == Signature(5, 1)) return ConditionCase::d6_lorentz;
  if (sig.q == 0) {
    switch (sig.p) {
      case 2: return ConditionCase::d2;
      case 3: return ConditionCase::d3;
      case 4: return ConditionCase::d4;
      case 5: return ConditionCase::d5;
      case 6: return ConditionCase::d6;
      case 8: return ConditionCase::d8;
      default: break;
    }
  }
  throw Error("no degree-separated system for signature " + sig.str());
}

double ConditionReport::worst() const {
  double w = 0.0;
  for (const auto& [k, v] : residuals) w = std::max(w, std::isnan(v) ? INFINITY : v);
  return w;
}

Rows instanton_rows(const Multivector& F, const StructureData& data) {
  require_hermitian(data);
  const Signature s = data.sig;
  const double mu = data.mu;
  Rows rows;
  switch (condition_case_for(s)) {
    case ConditionCase::d2:
      rows.push_back({"F", F});
      break;
    case ConditionCase::d3: {
      const double r = hermitian_r(data);
      rows.push_back({"contraction", r * hodge_star(F) - I * mu * interior(data.form("vartheta"), F)});
      break;
    }
    case ConditionCase::d4: {
      const Multivector& w = data.form("omega");
      const double r = hermitian_r(data);
      rows.push_back({"wedge_omega", wedge(F, w)});
      rows.push_back({"duality", F + mu * hodge_star(F) - (I / r) * generalized_product(F, w, 1)});
      break;
    }
    case ConditionCase::d5: {
      const Multivector& w = data.form("omega");
      const double r = hermitian_r(data);
      Multivector th = theta5(data, r);
      rows.push_back({"two_form", r * F + mu * hodge_star(wedge(F, th)) - I * generalized_product(F, w, 1)});
      rows.push_back({"one_form", generalized_product(F, th, 1) + I * mu * hodge_star(wedge(F, w))});
      rows.push_back({"pairing", scalar_mv(s, inner(F, w))});
      break;
    }
    case ConditionCase::d6: {
      const Multivector& w = data.form("omega");
      const double r = hermitian_r(data);
      rows.push_back({"four_form", mu * r * hodge_star(F) + wedge(F, w) - I * mu * hodge_star(generalized_product(F, w, 1))});
      rows.push_back({"pairing", scalar_mv(s, inner(F, w))});
      break;
    }
    case ConditionCase::d8: {
      const Multivector& w = data.form("omega");
      const Multivector& th = data.form("Theta");
      const double r = hermitian_r(data);
      rows.push_back({"pairing", scalar_mv(s, inner(F, w))});
      rows.push_back({"two_form", r * F - I * generalized_product(F, w, 1) - generalized_product(F, th, 2)});
      Multivector fw = wedge(F, w);
      rows.push_back({"four_form", fw + I * generalized_product(F, th, 1) + mu * hodge_star(fw)});
      rows.push_back({"six_form", r * hodge_star(F) - mu * wedge(F, th) - I * hodge_star(generalized_product(F, w, 1))});
      break;
    }
    case ConditionCase::d6_lorentz:
      throw Error("the Lorentzian system is stated for the curving condition only");
  }
  return rows;
}

Rows curving_rows(const Multivector& H, const StructureData& data) {
  require_hermitian(data);
  const Signature s = data.sig;
  const double mu = data.mu;
  Rows rows;
  switch (condition_case_for(s)) {
    case ConditionCase::d2:
      throw Error("no three-forms in dimension two");
    case ConditionCase::d3:
      rows.push_back({"H", H});
      break;
    case ConditionCase::d4: {
      const Multivector& w = data.form("omega");
      const double r = hermitian_r(data);
      rows.push_back({"three_form", H + (I / r) * generalized_product(H, w, 1)});
      rows.push_back({"one_form", hodge_star(H) - (I * mu / r) * generalized_product(H, w, 2)});
      break;
    }
    case ConditionCase::d5: {
      const Multivector& w = data.form("omega");
      const double r = hermitian_r(data);
      Multivector th = theta5(data, r);
      Multivector sh = hodge_star(H);
      rows.push_back({"two_form", r * sh + mu * generalized_product(H, th, 1) - I * generalized_product(sh, w, 1)});
      rows.push_back({"one_form", hodge_star(wedge(H, th)) + I * mu * generalized_product(H, w, 2)});
      rows.push_back({"pairing", scalar_mv(s, inner(sh, w))});
      break;
    }
    case ConditionCase::d6: {
      const Multivector& w = data.form("omega");
      const double r = hermitian_r(data);
      Multivector sh = hodge_star(H);
      Multivector hw = generalized_product(H, w, 1);
      rows.push_back({"five_form", wedge(H + I * mu * sh, w)});
      rows.push_back({"three_form", mu * r * sh + hw + I * (mu * hodge_star(hw) - r * H)});
      break;
    }
    case ConditionCase::d8: {
      const Multivector& w = data.form("omega");
      const Multivector& th = data.form("Theta");
      const double r = hermitian_r(data);
      rows.push_back({"one_form", I * generalized_product(H, w, 2) + generalized_product(H, th, 3)});
      rows.push_back({"seven_form", wedge(H, th) - I * mu * hodge_star(generalized_product(H, w, 2))});
      rows.push_back({"three_form", r * H + I * generalized_product(H, w, 1) - generalized_product(H, th, 2) +
                                        I * mu * hodge_star(wedge(H, w))});
      rows.push_back({"five_form", mu * r * hodge_star(H) - I * wedge(H, w) - generalized_product(H, th, 1) +
                                       I * mu * hodge_star(generalized_product(H, w, 1))});
      break;
    }
    case ConditionCase::d6_lorentz: {
      LorentzSplit ls = lorentz_split(H, data);
      const Multivector& w = ls.omega;
      rows.push_back({"beta", ls.huv + mu * hodge_star(ls.hperp) + I * generalized_product(ls.hperp, w, 2) +
                                  I * interior(ls.huv, w)});
      rows.push_back({"chi_wedge", wedge(ls.chi, w)});
      rows.push_back({"chi_duality", mu * hodge_star(ls.chi) - ls.chi + I * generalized_product(ls.chi, w, 1)});
      break;
    }
  }
  return rows;
}

ConditionReport instanton_residual(const Multivector& F, const StructureData& data, double tol) {
  ConditionCase c = condition_case_for(data.sig);
  return make_report(instanton_rows(F, data), F.norm(), row_weight(data, c, 2), c, tol);
}

ConditionReport curving_residual(const Multivector& H, const StructureData& data, double tol) {
  ConditionCase c = condition_case_for(data.sig);
  return make_report(curving_rows(H, data), H.norm(), row_weight(data, c, 3), c, tol);
}

double clifford_kernel_oracle(const Multivector& form, const Vector& eta, const CliffordRep& rep) {
  const double n = form.norm() * eta.norm();
  if (n == 0.0) return 0.0;
  return (rep.quantize(form) * eta).norm() / n;
}

Vector form_coordinates(const Multivector& x, int degree) {
  std::vector<Blade> bs = degree_blades(x.sig(), degree);
  Vector c(bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) c(i) = x.coeff(bs[i]);
  return c;
}

Multivector form_from_coordinates(Signature sig, const Vector& c, int degree) {
  std::vector<Blade> bs = degree_blades(sig, degree);
  if (std::size_t(c.size()) != bs.size()) throw Error("coordinate vector has the wrong length");
  Multivector out(sig);
  for (std::size_t i = 0; i < bs.size(); ++i)
    if (c(i) != 0.0) out.add(bs[i], c(i));
  return out;
}

Matrix clifford_kernel_map(const Vector& eta, const CliffordRep& rep, int degree) {
  std::vector<Blade> bs = degree_blades(rep.sig(), degree);
  Matrix m(eta.size(), bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) m.col(i) = rep.quantize(Multivector::blade(rep.sig(), bs[i])) * eta;
  return m;
}

Matrix row_system_map(const StructureData& data, int degree, const std::vector<std::string>& skip) {
  std::vector<Blade> bs = degree_blades(data.sig, degree);
  std::vector<std::vector<cplx>> cols;
  for (Blade b : bs) {
    Multivector x = Multivector::blade(data.sig, b);
    Rows rows = degree == 2 ? instanton_rows(x, data) : degree == 3 ? curving_rows(x, data) : Rows{};
    if (rows.empty()) throw Error("row systems exist for degrees two and three only");
    std::vector<cplx> col;
    for (const auto& [name, m] : rows) {
      if (std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
      for (Blade t = 0; t < Blade(m.sig().blade_count()); ++t) col.push_back(m.coeff(t));
    }
    cols.push_back(std::move(col));
  }
  Matrix a(cols.empty() ? 0 : cols[0].size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) a(i, j) = cols[j][i];
  return a;
}

Matrix nullspace(const Matrix& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * smax) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

int kernel_dimension(const Vector& eta, const CliffordRep& rep, int degree) {
  if (eta.norm() == 0.0) throw Error("kernel_dimension needs a nonzero spinor");
  return int(nullspace(clifford_kernel_map(eta, rep, degree)).cols());
}

EquivalenceReport nullspace_equivalence(const Vector& eta, const PairedModule& pm, int mu, int degree, double tol) {
  EquivalenceReport rep;
  Vector e = eta / eta.norm();
  SquareResult h = hermitian_square(pm, e);
  StructureData data = extract_structure(h.alpha, pm.rep.sig(), mu, PairingKind::hermitian);
  Matrix m = clifford_kernel_map(e, pm.rep, degree);
  Matrix a = row_system_map(data, degree);
  Matrix k = nullspace(m);
  Matrix s = nullspace(a);
  rep.kernel_dim = int(k.cols());
  rep.system_dim = int(s.cols());
  auto spectral = [](const Matrix& x) {
    return x.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(x).singularValues()(0);
  };
  const double na = spectral(a), nm = spectral(m);
  rep.system_on_kernel = k.cols() == 0 || na == 0.0 ? 0.0 : (a * k).norm() / na;
  rep.kernel_on_system = s.cols() == 0 || nm == 0.0 ? 0.0 : (m * s).norm() / nm;
  rep.passed = rep.kernel_dim == rep.system_dim && rep.system_on_kernel < tol && rep.kernel_on_system < tol;
  return rep;
}

namespace {

// Polynomials in the six frame coordinates (x_u, x_v, x_1..x_4).
using Exponent = std::array<int, 6>;

struct Poly {
  std::map<Exponent, double> c;

  Poly& operator+=(const Poly& o) {
    for (const auto& [e, v] : o.c) c[e] += v;
    return *this;
  }
  Poly operator*(double s) const {
    Poly p = *this;
    for (auto& [e, v] : p.c) v *= s;
    return p;
  }
  Poly diff(int i) const {
    Poly p;
    for (const auto& [e, v] : c)
      if (e[i] > 0) {
        Exponent f = e;
        f[i] -= 1;
        p.c[f] += v * e[i];
      }
    return p;
  }
  // Integral from 0 to x_i along the i-th coordinate.
  Poly integrate(int i) const {
    Poly p;
    for (const auto& [e, v] : c) {
      Exponent f = e;
      f[i] += 1;
      p.c[f] += v / f[i];
    }
    return p;
  }
  Poly times_coordinate(int i) const {
    Poly p;
    for (const auto& [e, v] : c) {
      Exponent f = e;
      f[i] += 1;
      p.c[f] += v;
    }
    return p;
  }
  double operator()(const std::array<double, 6>& x) const {
    double s = 0.0;
    for (const auto& [e, v] : c) {
      double t = v;
      for (int i = 0; i < 6; ++i) t *= std::pow(x[i], e[i]);
      s += t;
    }
    return s;
  }
};

Poly random_poly(Rng& rng, int max_degree, bool depends_on_xv) {
  Poly p;
  Exponent e{};
  for (int n = 0; n < 4096; ++n) {
    int deg = 0;
    for (int i = 0, m = n; i < 6; ++i, m /= 4) deg += e[i] = m % 4;
    if (deg > max_degree || (!depends_on_xv && e[1] > 0)) continue;
    p.c[e] = 0.5 * rng.normal();
  }
  return p;
}

using PolyForm = std::map<Blade, Poly>;

void add_term(PolyForm& f, Blade b, const Poly& p, double sign = 1.0) { f[b] += p * sign; }

// Exterior derivative along the coordinates listed in dirs.
PolyForm exterior_d(const PolyForm& f, std::initializer_list<int> dirs) {
  PolyForm out;
  for (const auto& [b, p] : f)
    for (int a : dirs) {
      const Blade ab = Blade(1) << a;
      if (b & ab) continue;
      add_term(out, b | ab, p.diff(a), reorder_sign(ab, b));
    }
  return out;
}

PolyForm partial(const PolyForm& f, int i) {
  PolyForm out;
  for (const auto& [b, p] : f) out[b] = p.diff(i);
  return out;
}

// Euclidean Hodge star on the last four coordinates.
PolyForm star_h(const PolyForm& f) {
  const Signature h(4, 0);
  PolyForm out;
  for (const auto& [b, p] : f) {
    Multivector s = hodge_star(Multivector::blade(h, b >> 2));
    for (const auto& [t, v] : s.terms()) add_term(out, t << 2, p, v.real());
  }
  return out;
}

PolyForm scaled(const PolyForm& f, double s) {
  PolyForm out;
  for (const auto& [b, p] : f) out[b] = p * s;
  return out;
}

PolyForm sum(const PolyForm& a, const PolyForm& b) {
  PolyForm out = a;
  for (const auto& [k, p] : b) out[k] += p;
  return out;
}

// e^a ^ f for a coordinate index a below every index present in f.
PolyForm wedge_low(int a, const PolyForm& f) {
  PolyForm out;
  for (const auto& [b, p] : f) out[b | (Blade(1) << a)] = p;
  return out;
}

Multivector evaluate(const PolyForm& f, Signature sig, const std::array<double, 6>& x) {
  Multivector m(sig);
  for (const auto& [b, p] : f) {
    double v = p(x);
    if (v != 0.0) m.add(b, v);
  }
  return m;
}

}  // namespace

ConditionReport flat_lorentz_example(const Vector& eta, const PairedModule& pm, int mu, Rng& rng, int points,
                                     double tol) {
  const Signature sig(5, 1);
  if (pm.rep.sig() != sig) throw Error("the flat example lives in signature (5,1)");
  Vector e = eta / eta.norm();
  StructureData data = extract_structure(hermitian_square(pm, e).alpha, sig, mu, PairingKind::hermitian);
  NullFrame nf = null_frame(data.form("u"), data.form("v"));
  constexpr int xu = 0, xv = 1;
  const auto perp = {2, 3, 4, 5};

  PolyForm f{{0u, random_poly(rng, 2, true)}};
  PolyForm g{{0u, random_poly(rng, 3, true)}};
  PolyForm av = exterior_d(g, perp);
  PolyForm bp;
  for (int i = 2; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) bp[(Blade(1) << i) | (Blade(1) << j)] = random_poly(rng, 2, false);
  PolyForm ao;
  for (int i = 2; i < 6; ++i) ao[Blade(1) << i] = random_poly(rng, 2, false);

  PolyForm star_dbp = star_h(exterior_d(bp, perp));
  PolyForm integrand = sum(exterior_d(f, perp), partial(av, xu));
  PolyForm au;
  for (const auto& [b, p] : integrand) au[b] = p.integrate(xv);
  for (const auto& [b, p] : star_dbp) au[b] += p.times_coordinate(xv) * (-double(mu));
  au = sum(au, ao);

  PolyForm b = wedge_low(xu, wedge_low(xv, f));
  b = sum(b, wedge_low(xu, au));
  b = sum(b, wedge_low(xv, av));
  b = sum(b, bp);
  PolyForm H = exterior_d(b, {0, 1, 2, 3, 4, 5});

  PolyForm first = sum(scaled(star_dbp, mu),
                       scaled(sum(exterior_d(f, perp), sum(partial(av, xu), scaled(partial(au, xv), -1.0))), -1.0));
  PolyForm chi = sum(partial(bp, xv), scaled(exterior_d(av, perp), -1.0));
  PolyForm second = sum(star_h(chi), scaled(chi, -double(mu)));

  ConditionReport rep;
  rep.dimension_case = ConditionCase::d6_lorentz;
  rep.tol = tol;
  double r1 = 0.0, r2 = 0.0, rc = 0.0, ro = 0.0;
  for (int k = 0; k < points; ++k) {
    std::array<double, 6> x;
    for (double& c : x) c = 2.0 * rng.uniform() - 1.0;
    Multivector hf = evaluate(H, sig, x);
    const double hn = std::max(hf.norm(), 1e-300);
    r1 = std::max(r1, evaluate(first, sig, x).norm() / hn);
    r2 = std::max(r2, evaluate(second, sig, x).norm() / hn);
    Multivector hc = nf.from_frame(hf);
    rc = std::max(rc, curving_residual(hc, data, tol).worst());
    ro = std::max(ro, clifford_kernel_oracle(hc, e, pm.rep));
  }
  rep.residuals = {{"reduced_first", r1}, {"reduced_second", r2}, {"curving", rc}, {"clifford", ro}};
  rep.passed = rep.worst() <= tol;
  return rep;
}

}  // namespace ka
