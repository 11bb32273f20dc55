#include "ka/lowdim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ka {

namespace {

const cplx I(0.0, 1.0);

Multivector real_part(const Multivector& a) { return (a + conj(a)) * 0.5; }
Multivector imag_part(const Multivector& a) { return (a - conj(a)) * cplx(0.0, -0.5); }

double imag_residual(const Multivector& a) {
  double n = a.norm();
  return n == 0.0 ? 0.0 : imag_part(a).norm() / n;
}

double rel(double num, double scale) { return scale > 0.0 ? num / scale : num; }

Multivector wedge_all(const std::vector<Multivector>& fs) {
  Multivector out = fs.at(0);
  for (std::size_t i = 1; i < fs.size(); ++i) out = wedge(out, fs[i]);
  return out;
}

int single_grade(const Multivector& a) {
  auto gs = a.grades(1e-14 * a.max_abs());
  if (gs.size() != 1) throw Error("form is not homogeneous");
  return gs[0];
}

Multivector contract_blade(Blade x, const Multivector& a) {
  Multivector out = a;
  for (int i = 0; i < kMaxDim; ++i)
    if (x & (Blade(1) << i)) out = interior_basis(i, out);
  return out;
}

// Sesquilinear coefficient pairing, used only for projections.
cplx coeff_dot(const Multivector& a, const Multivector& b) {
  cplx s = 0.0;
  for (const auto& [k, v] : a.terms()) s += std::conj(v) * b.coeff(k);
  return s;
}

std::vector<Multivector> peel(const Multivector& rho) {
  const int k = single_grade(rho);
  if (k == 1) return {rho};
  const Signature& sig = rho.sig();
  int best = -1;
  double best_n = -1.0;
  Multivector sigma;
  for (int i = 0; i < sig.d(); ++i) {
    Multivector c = interior_basis(i, rho);
    double n = c.norm();
    if (n > best_n) {
      best_n = n;
      best = i;
      sigma = c;
    }
  }
  if (best < 0 || best_n == 0.0) throw Error("cannot peel a zero form");
  Blade y = 0;
  double ymax = -1.0;
  for (const auto& [b, v] : sigma.terms())
    if (std::abs(v) > ymax) {
      ymax = std::abs(v);
      y = b;
    }
  Multivector theta = contract_blade(y, rho);
  Multivector w = wedge(theta, sigma);
  cplx c = coeff_dot(w, rho) / coeff_dot(w, w);
  std::vector<Multivector> out{theta * c};
  for (auto& f : peel(sigma)) out.push_back(f);
  return out;
}

void require_tag(const StructureData& d, std::initializer_list<const char*> forms) {
  for (const char* f : forms)
    if (!d.has_form(f)) throw Error(std::string("structure data lacks form ") + f);
}

// Default sign of the degree-zero part of a Hermitian square: the Hermitian
// pairing is definite in these cases, with the sign fixed by the module label.
double default_r_sign(Signature sig, int mu) {
  if (sig == Signature(3, 0)) return -mu;
  if (sig == Signature(5, 0)) return mu;
  return 1.0;
}

double stored_or_default_r(const StructureData& d, double magnitude) {
  auto it = d.scalars.find("r");
  if (it != d.scalars.end()) return it->second.real();
  return default_r_sign(d.sig, d.mu) * magnitude;
}

double isotropy_residual(const std::vector<Multivector>& fs) {
  double w = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i; j < fs.size(); ++j)
      w = std::max(w, std::abs(inner(fs[i], fs[j])) / (fs[i].norm() * fs[j].norm()));
  return w;
}

std::size_t expected_factor_count(const StructureData& d) {
  switch (d.tag) {
    case StructureTag::iso1form: return 1;
    case StructureTag::iso_pair: return 2;
    case StructureTag::iso_triple: return 3;
    case StructureTag::iso_quad: return 4;
    default: return 0;
  }
}

// Duality eigenvalue of the decomposable bilinear squares.
cplx iso_duality(const StructureData& d) {
  const int dim = d.sig.d();
  if (dim == 2) return I * double(d.mu);
  if (dim == 6 && d.sig.q == 0) return I * double(d.mu);
  return double(d.mu);
}

bool iso_has_duality(const StructureData& d) { return d.sig.d() % 2 == 0; }

}  // namespace

std::string to_string(StructureTag t) {
  switch (t) {
    case StructureTag::scalar: return "scalar";
    case StructureTag::real1form: return "real1form";
    case StructureTag::iso1form: return "iso1form";
    case StructureTag::iso_pair: return "iso_pair";
    case StructureTag::iso_triple: return "iso_triple";
    case StructureTag::iso_quad: return "iso_quad";
    case StructureTag::kahler2form: return "kahler2form";
    case StructureTag::pair: return "pair";
    case StructureTag::complex4form: return "complex4form";
    case StructureTag::lorentz_pair: return "lorentz_pair";
  }
  return "?";
}

StructureTag structure_tag_from_string(const std::string& s) {
  for (StructureTag t : {StructureTag::scalar, StructureTag::real1form, StructureTag::iso1form, StructureTag::iso_pair,
                         StructureTag::iso_triple, StructureTag::iso_quad, StructureTag::kahler2form, StructureTag::pair,
                         StructureTag::complex4form, StructureTag::lorentz_pair})
    if (to_string(t) == s) return t;
  throw Error("unknown structure tag: " + s);
}

cplx StructureData::scalar(const std::string& name) const {
  auto it = scalars.find(name);
  if (it == scalars.end()) throw Error("structure data lacks scalar " + name);
  return it->second;
}

const Multivector& StructureData::form(const std::string& name) const {
  auto it = forms.find(name);
  if (it == forms.end()) throw Error("structure data lacks form " + name);
  return it->second;
}

bool lowdim_supported(Signature sig) {
  if (sig.q == 0) return (sig.p >= 2 && sig.p <= 6) || sig.p == 8;
  return sig == Signature(5, 1);
}

double decomposability_residual(const Multivector& rho) {
  const int k = single_grade(rho);
  if (k <= 1) return 0.0;
  const Signature& sig = rho.sig();
  const double n2 = rho.norm() * rho.norm();
  double w = 0.0;
  for (Blade x = 0; x <= sig.volume_mask(); ++x) {
    if (grade_of(x) != k - 1) continue;
    Multivector c = contract_blade(x, rho);
    if (c.empty()) continue;
    w = std::max(w, wedge(c, rho).norm() / n2);
  }
  return w;
}

PluckerResult plucker_factor(const Multivector& rho, double tol) {
  PluckerResult out;
  out.decomposability = decomposability_residual(rho);
  if (out.decomposability > tol) {
    std::ostringstream os;
    os << "form is not decomposable: residual " << out.decomposability;
    throw Error(os.str());
  }
  out.factors = peel(rho);
  out.reconstruction = distance(wedge_all(out.factors), rho) / rho.norm();
  return out;
}

VerificationReport verify_8d_impure(cplx lambda, const Multivector& Omega, int mu, double tol) {
  if (Omega.sig() != Signature(8, 0)) throw Error("verify_8d_impure expects signature (8,0)");
  VerificationReport r;
  r.tol = tol;
  const double n = Omega.norm();
  const double n2 = n * n;
  if (n == 0.0) throw Error("Omega vanishes");
  r.residuals["duality"] = distance(hodge_star(Omega), double(mu) * Omega) / n;
  r.residuals["norm"] = std::abs(inner(Omega, Omega) - 14.0 * lambda * lambda) / n2;
  r.residuals["spin7_type"] = (12.0 * lambda * Omega + generalized_product(Omega, Omega, 2)).norm() / n2;
  Multivector oR = real_part(Omega), oI = imag_part(Omega);
  const double lR = lambda.real(), lI = lambda.imag();
  const double nR = inner(oR, oR).real(), nI = inner(oI, oI).real();
  r.residuals["impure_norms"] = std::abs(nR + 14.0 * lI * lI - nI - 14.0 * lR * lR) / n2;
  r.residuals["impure_cross"] = std::abs(inner(oR, oI).real() - 14.0 * lR * lI) / n2;
  r.residuals["impure_mixed"] = (6.0 * (lR * oI + lI * oR) + generalized_product(oR, oI, 2)).norm() / n2;
  r.residuals["impure_diagonal"] =
      (12.0 * (lR * oR - lI * oI) + generalized_product(oR, oR, 2) - generalized_product(oI, oI, 2)).norm() / n2;
  if (std::abs(lambda - 1.0) < 1e-12)
    r.residuals["normalized"] = (6.0 * oI + generalized_product(oR, oI, 2)).norm() / n2;
  r.finalize();
  return r;
}

Multivector conjugate_oneform(const Multivector& u) {
  const Signature& sig = u.sig();
  const double un = u.norm();
  if (un == 0.0) throw Error("conjugate_oneform: u vanishes");
  if (std::abs(inner(u, u)) > 1e-9 * un * un) throw Error("conjugate_oneform: u is not isotropic");
  std::vector<int> axes;
  for (int i = sig.d() - 1; i >= 0; --i)
    if (sig.metric(i) < 0) axes.push_back(i);
  for (int i = 0; i < sig.d(); ++i)
    if (sig.metric(i) > 0) axes.push_back(i);
  for (int i : axes) {
    Multivector c = Multivector::basis(sig, i);
    cplx uc = inner(u, c);
    if (std::abs(uc) <= 1e-8 * un) continue;
    cplx b = 1.0 / uc;
    cplx a = -b * double(sig.metric(i)) / (2.0 * uc);
    return a * u + b * c;
  }
  throw Error("conjugate_oneform: no axis pairs with u");
}

VerificationReport verify_lorentz6(const Multivector& u, const Multivector& omega, int mu, double tol) {
  if (u.sig() != Signature(5, 1)) throw Error("verify_lorentz6 expects signature (5,1)");
  VerificationReport r;
  r.tol = tol;
  const double un = u.norm();
  if (un == 0.0) throw Error("verify_lorentz6: u vanishes");
  r.residuals["u_isotropic"] = std::abs(inner(u, u)) / (un * un);
  r.residuals["omega_u"] = interior(u, omega).norm() / (un * std::max(1.0, omega.norm()));
  r.residuals["omega_norm"] = std::abs(inner(omega, omega) - 2.0);
  r.residuals["omega_volume"] =
      distance(2.0 * double(mu) * hodge_star(u), wedge(wedge(u, omega), omega)) / un;
  r.residuals["omega_nonzero"] = omega.norm() > 0.0 ? 0.0 : INFINITY;
  r.finalize();
  return r;
}

Multivector NullFrame::to_frame(const Multivector& a) const { return outermorphism(inverse, a); }
Multivector NullFrame::from_frame(const Multivector& a) const { return outermorphism(frame, a); }

Multivector NullFrame::screen(const Multivector& a) const {
  Multivector f = to_frame(a);
  Multivector out(Signature(sig.d() - 2, 0));
  for (const auto& [b, v] : f.terms())
    if ((b & 3u) == 0) out.add(b >> 2, v);
  return out;
}

Multivector NullFrame::unscreen(const Multivector& a) const {
  Multivector f(sig);
  for (const auto& [b, v] : a.terms()) f.add(b << 2, v);
  return from_frame(f);
}

NullFrame null_frame(const Multivector& u, const Multivector& v) {
  const Signature& sig = u.sig();
  const int d = sig.d();
  if (std::abs(inner(u, v) - 1.0) > 1e-9 || std::abs(inner(u, u)) > 1e-9 * u.norm() * u.norm() ||
      std::abs(inner(v, v)) > 1e-9 * v.norm() * v.norm())
    throw Error("null_frame expects isotropic u, v with <u,v> = 1");
  std::vector<Multivector> fs;
  for (int i = 0; i < d && int(fs.size()) < d - 2; ++i) {
    Multivector x = Multivector::basis(sig, i);
    x = x - inner(x, v) * u - inner(x, u) * v;
    for (const auto& f : fs) x = x - inner(x, f) * f;
    cplx n2 = inner(x, x);
    if (n2.real() < 1e-8) continue;
    fs.push_back(x / std::sqrt(n2.real()));
  }
  if (int(fs.size()) != d - 2) throw Error("null_frame: screen basis incomplete");
  NullFrame nf;
  nf.sig = sig;
  nf.frame = Eigen::MatrixXcd(d, d);
  nf.frame.col(0) = u.one_form_coeffs();
  nf.frame.col(1) = v.one_form_coeffs();
  for (int i = 0; i < d - 2; ++i) nf.frame.col(i + 2) = fs[i].one_form_coeffs();
  Multivector top = wedge(u, v);
  for (const auto& f : fs) top = wedge(top, f);
  if (top.coeff(sig.volume_mask()).real() < 0.0) nf.frame.col(d - 1) *= -1.0;
  nf.inverse = nf.frame.inverse();
  return nf;
}

VerificationReport check_invariants(const StructureData& data, double tol) {
  VerificationReport r;
  r.tol = tol;
  const Signature& sig = data.sig;
  const int d = sig.d();
  const double mu = data.mu;
  auto& res = r.residuals;
  switch (data.tag) {
    case StructureTag::scalar: {
      cplx rr = data.scalar("r");
      res["r_real"] = rel(std::abs(rr.imag()), std::abs(rr));
      res["r_nonzero"] = std::abs(rr) > 0.0 ? 0.0 : INFINITY;
      break;
    }
    case StructureTag::real1form: {
      require_tag(data, {"vartheta"});
      cplx rr = data.scalar("r");
      const Multivector& th = data.form("vartheta");
      res["r_real"] = rel(std::abs(rr.imag()), std::abs(rr));
      res["vartheta_real"] = imag_residual(th);
      res["vartheta_norm"] = rel(std::abs(inner(th, th) - rr * rr), std::norm(rr));
      break;
    }
    case StructureTag::iso1form:
    case StructureTag::iso_pair:
    case StructureTag::iso_triple:
    case StructureTag::iso_quad: {
      if (data.factors.size() != expected_factor_count(data)) {
        res["factor_count"] = INFINITY;
        break;
      }
      res["isotropy"] = isotropy_residual(data.factors);
      Multivector rho = wedge_all(data.factors);
      if (rho.norm() == 0.0) {
        res["nonzero"] = INFINITY;
        break;
      }
      if (iso_has_duality(data)) res["duality"] = distance(hodge_star(rho), iso_duality(data) * rho) / rho.norm();
      break;
    }
    case StructureTag::kahler2form: {
      require_tag(data, {"omega"});
      const Multivector& w = data.form("omega");
      const double ww = inner(w, w).real();
      const double wn = w.norm();
      res["omega_real"] = imag_residual(w);
      if (wn == 0.0) {
        res["omega_nonzero"] = INFINITY;
        break;
      }
      if (d == 4) {
        res["omega_duality"] = distance(hodge_star(w), mu * w) / wn;
        double rr = stored_or_default_r(data, std::sqrt(ww / 2.0));
        res["omega_norm"] = std::abs(ww - 2.0 * rr * rr) / ww;
      } else if (d == 5) {
        Multivector ww2 = wedge(w, w);
        res["omega_identity"] = distance(ww * hodge_star(w), wedge(w, hodge_star(ww2))) / (wn * wn * wn);
        double rr = stored_or_default_r(data, std::sqrt(ww / 2.0));
        res["omega_norm"] = std::abs(ww - 2.0 * rr * rr) / ww;
        if (data.has_form("theta"))
          res["theta"] = distance(data.form("theta"), (mu / (2.0 * rr)) * hodge_star(ww2)) / wn;
      } else if (d == 6) {
        double rr = stored_or_default_r(data, std::sqrt(ww / 3.0));
        res["omega_identity"] = distance(2.0 * rr * hodge_star(w), mu * wedge(w, w)) / (wn * wn);
        res["omega_norm"] = std::abs(ww - 3.0 * rr * rr) / ww;
      } else {
        throw Error("kahler2form data requires d = 4, 5 or 6");
      }
      break;
    }
    case StructureTag::pair: {
      require_tag(data, {"omega", "Theta"});
      const Multivector& w = data.form("omega");
      const Multivector& th = data.form("Theta");
      const double ww = inner(w, w).real(), tt = inner(th, th).real();
      const double rr = stored_or_default_r(data, std::sqrt((2.0 * ww + tt) / 14.0));
      const double s2 = std::max(rr * rr, 1e-300);
      res["omega_real"] = imag_residual(w);
      res["Theta_real"] = imag_residual(th);
      res["Theta_duality"] = distance(hodge_star(th), mu * th) / th.norm();
      res["norm"] = std::abs(14.0 * rr * rr - 2.0 * ww - tt) / (14.0 * s2);
      Multivector w2 = wedge(w, w);
      res["quartic"] =
          (2.0 * w2 + 2.0 * mu * hodge_star(w2) + generalized_product(th, th, 2) + 12.0 * rr * th).norm() / s2;
      res["sextic"] = (wedge(w, th) + 3.0 * mu * rr * hodge_star(w)).norm() / s2;
      break;
    }
    case StructureTag::complex4form: {
      require_tag(data, {"Omega"});
      VerificationReport v = verify_8d_impure(data.scalar("lambda"), data.form("Omega"), data.mu, tol);
      for (const auto& [k, x] : v.residuals) res[k] = x;
      break;
    }
    case StructureTag::lorentz_pair: {
      require_tag(data, {"u", "omega"});
      const Multivector& u = data.form("u");
      VerificationReport v = verify_lorentz6(u, data.form("omega"), data.mu, tol);
      for (const auto& [k, x] : v.residuals) res[k] = x;
      res["u_real"] = imag_residual(u);
      res["omega_real"] = imag_residual(data.form("omega"));
      if (data.has_form("v")) {
        const Multivector& vv = data.form("v");
        res["v_conjugate"] = std::abs(inner(u, vv) - 1.0);
        res["v_isotropic"] = std::abs(inner(vv, vv)) / (vv.norm() * vv.norm());
      }
      break;
    }
  }
  r.finalize();
  return r;
}

Multivector build_square_from_data(const StructureData& data, double tol) {
  VerificationReport inv = check_invariants(data, tol);
  if (!inv.passed) {
    std::ostringstream os;
    os << "structure data violates invariants:";
    for (const auto& [k, v] : inv.residuals)
      if (!(v < tol)) os << " " << k << "=" << v;
    throw Error(os.str());
  }
  const Signature& sig = data.sig;
  const int d = sig.d();
  const double mu = data.mu;
  const Multivector one = Multivector::scalar(sig, 1.0);
  const Multivector nu = Multivector::volume(sig);
  switch (data.tag) {
    case StructureTag::scalar: {
      double rr = data.scalar("r").real();
      return rr * (one + I * mu * nu);
    }
    case StructureTag::real1form:
      return data.scalar("r").real() * one + real_part(data.form("vartheta"));
    case StructureTag::iso1form:
    case StructureTag::iso_pair:
    case StructureTag::iso_triple:
    case StructureTag::iso_quad:
      return wedge_all(data.factors);
    case StructureTag::kahler2form: {
      Multivector w = real_part(data.form("omega"));
      const double ww = inner(w, w).real();
      if (d == 4) {
        double rr = stored_or_default_r(data, std::sqrt(ww / 2.0));
        return rr * one + I * w - mu * rr * nu;
      }
      if (d == 5) {
        double rr = stored_or_default_r(data, std::sqrt(ww / 2.0));
        return rr * one + (mu / (2.0 * rr)) * hodge_star(wedge(w, w)) + I * w;
      }
      double rr = stored_or_default_r(data, std::sqrt(ww / 3.0));
      return rr * one + I * w - mu * hodge_star(w) - I * mu * rr * nu;
    }
    case StructureTag::pair: {
      Multivector w = real_part(data.form("omega"));
      Multivector th = real_part(data.form("Theta"));
      const double rr =
          stored_or_default_r(data, std::sqrt((2.0 * inner(w, w).real() + inner(th, th).real()) / 14.0));
      return rr * one + I * w + th - I * mu * hodge_star(w) + mu * rr * nu;
    }
    case StructureTag::complex4form: {
      cplx lam = data.scalar("lambda");
      return lam * one + data.form("Omega") + mu * lam * nu;
    }
    case StructureTag::lorentz_pair: {
      Multivector u = real_part(data.form("u"));
      Multivector w = real_part(data.form("omega"));
      return geometric_product(u, one + I * w - mu * nu);
    }
  }
  throw Error("unhandled structure tag");
}

StructureData extract_structure(const Multivector& square, Signature sig, int mu, PairingKind kind, double tol) {
  if (square.sig() != sig) throw Error("extract_structure: signature mismatch");
  if (!lowdim_supported(sig)) throw Error("extract_structure: no closed form for signature " + sig.str());
  StructureData out;
  out.sig = sig;
  out.kind = kind;
  out.mu = mu;
  const int d = sig.d();
  const bool herm = kind == PairingKind::hermitian;
  auto take_factors = [&](const Multivector& rho) {
    PluckerResult pr = plucker_factor(rho, tol);
    out.factors = pr.factors;
  };
  if (sig == Signature(5, 1)) {
    if (herm) {
      out.tag = StructureTag::lorentz_pair;
      Multivector u = real_part(square.grade(1));
      Multivector rho = real_part(-I * square.grade(3));
      Multivector v = conjugate_oneform(u);
      out.forms["u"] = u;
      out.forms["v"] = v;
      out.forms["omega"] = interior(v, rho);
    } else {
      out.tag = StructureTag::iso_triple;
      take_factors(square.grade(3));
    }
    return out;
  }
  if (herm) {
    out.scalars["r"] = square.scalar_part().real();
    switch (d) {
      case 2: out.tag = StructureTag::scalar; break;
      case 3:
        out.tag = StructureTag::real1form;
        out.forms["vartheta"] = real_part(square.grade(1));
        break;
      case 4:
      case 6:
        out.tag = StructureTag::kahler2form;
        out.forms["omega"] = real_part(-I * square.grade(2));
        break;
      case 5:
        out.tag = StructureTag::kahler2form;
        out.forms["omega"] = real_part(-I * square.grade(2));
        out.forms["theta"] = real_part(square.grade(1));
        break;
      case 8:
        out.tag = StructureTag::pair;
        out.forms["omega"] = real_part(-I * square.grade(2));
        out.forms["Theta"] = real_part(square.grade(4));
        break;
      default: break;
    }
    return out;
  }
  switch (d) {
    case 2:
    case 3:
      out.tag = StructureTag::iso1form;
      out.factors = {square.grade(1)};
      break;
    case 4:
    case 5:
      out.tag = StructureTag::iso_pair;
      take_factors(square.grade(2));
      break;
    case 6:
      out.tag = StructureTag::iso_triple;
      take_factors(square.grade(3));
      break;
    case 8: {
      Multivector om = square.grade(4);
      const double n2 = om.norm() * om.norm();
      if (std::abs(inner(om, om)) < 1e-8 * n2) {
        out.tag = StructureTag::iso_quad;
        take_factors(om);
      } else {
        out.tag = StructureTag::complex4form;
        out.scalars["lambda"] = square.scalar_part();
        out.forms["Omega"] = om;
      }
      break;
    }
    default: break;
  }
  return out;
}

VerificationReport table_conditions(const StructureData& data, double tol) {
  VerificationReport r = check_invariants(data, tol);
  const int d = data.sig.d();
  const double mu = data.mu;
  if (data.tag == StructureTag::kahler2form && d == 4) {
    const Multivector& w = data.form("omega");
    const double rr = data.scalar("r").real();
    r.residuals["omega_square"] =
        distance(wedge(w, w), 2.0 * mu * rr * rr * Multivector::volume(data.sig)) / std::max(rr * rr, 1e-300);
  }
  if (data.tag == StructureTag::kahler2form && d == 5 && data.has_form("theta")) {
    const Multivector& w = data.form("omega");
    const Multivector& th = data.form("theta");
    const double rr = data.scalar("r").real();
    const double s2 = std::max(rr * rr, 1e-300);
    r.residuals["scalar_equation"] = std::abs(inner(th, th) + inner(w, w) - 3.0 * rr * rr) / s2;
    r.residuals["one_form_equation"] = distance(mu * hodge_star(wedge(w, w)), 2.0 * rr * th) / s2;
    r.residuals["two_form_equation"] = distance(mu * hodge_star(wedge(th, w)), rr * w) / s2;
  }
  if (data.tag == StructureTag::kahler2form && d == 6) {
    const Multivector& w = data.form("omega");
    const double ww = inner(w, w).real();
    r.residuals["omega_identity_sqrt"] =
        distance(std::sqrt(ww) * hodge_star(w), mu * std::sqrt(3.0) / 2.0 * wedge(w, w)) / ww;
  }
  r.finalize();
  return r;
}

VerificationReport compatibility_relations(const Multivector& hermitian, const Multivector& bilinear,
                                           const Multivector& bilinear_conj, Signature sig, int mu, double tol) {
  VerificationReport r;
  r.tol = tol;
  auto& res = r.residuals;
  const int d = sig.d();
  const double hn = hermitian.norm();
  if (sig.q != 0 || d < 2 || d > 6) throw Error("compatibility relations are tabulated for Euclidean d = 2..6");
  if (d == 2) {
    const Multivector& th = bilinear.grade(1);
    Multivector thb = conj(th);
    cplx n = inner(th, thb);
    double rr = hermitian.scalar_part().real();
    res["norm"] = std::abs(n - 2.0 * rr * rr) / (2.0 * rr * rr);
    Multivector tmpl = std::sqrt(n / 2.0) * (Multivector::scalar(sig, 1.0) + wedge(th, thb) / n);
    res["hermitian_template"] = distance(tmpl, hermitian) / hn;
  } else if (d == 3) {
    const Multivector& th = bilinear.grade(1);
    Multivector thb = conj(th);
    double rr = hermitian.scalar_part().real();
    res["norm"] = std::abs(inner(th, thb) - 2.0 * rr * rr) / (2.0 * rr * rr);
    Multivector vt = hermitian.grade(1);
    res["vartheta"] = distance(vt, (-I * double(mu) / (2.0 * rr)) * hodge_star(wedge(th, thb))) / hn;
    res["theta"] = distance(th, (-I * double(mu) / rr) * hodge_star(wedge(vt, th))) / th.norm();
  } else if (d == 4 || d == 5) {
    PluckerResult pr = plucker_factor(bilinear.grade(2), tol);
    const Multivector& t1 = pr.factors.at(0);
    const Multivector& t2 = pr.factors.at(1);
    Multivector b1 = conj(t1), b2 = conj(t2);
    cplx g11 = inner(t1, b1), g22 = inner(t2, b2), g12 = inner(t1, b2), g21 = inner(t2, b1);
    cplx det = g11 * g22 - g12 * g21;
    // The Hermitian pairing is definite with sign ell in (5,0), which carries into the root.
    cplx sq = std::sqrt(det) * (d == 5 ? double(mu) : 1.0);
    Multivector num = d == 4 ? g22 * wedge(t1, b1) + g11 * wedge(t2, b2) + g12 * wedge(b1, t2) - g21 * wedge(t1, b2)
                             : g22 * wedge(t1, b1) - g21 * wedge(t1, b2) - g12 * wedge(t2, b1) + g11 * wedge(t2, b2);
    Multivector w = hermitian.grade(2) * (-I);
    res["omega"] = distance(2.0 * I * w, num / sq) / hn;
    double rr = hermitian.scalar_part().real();
    res["r"] = std::abs(rr - 0.5 * sq) / std::abs(rr);
    Multivector quartic = wedge(wedge(t1, t2), wedge(b1, b2));
    if (d == 4) {
      res["top"] = distance(hermitian.grade(4), -1.0 * quartic / (2.0 * sq)) / hn;
    } else {
      res["one_form"] = distance(hermitian.grade(1), double(mu) * hodge_star(quartic) / (2.0 * sq)) / hn;
    }
  } else if (d == 6) {
    const Multivector& a = bilinear;
    const Multivector& ac = bilinear_conj;
    cplx n = inner(a, ac);
    cplx s8 = std::sqrt(8.0 * n);
    Multivector tmpl = std::sqrt(n / 8.0) * Multivector::scalar(sig, 1.0) + generalized_product(a, ac, 2) / s8 -
                       generalized_product(a, ac, 1) / s8 - wedge(a, ac) / s8;
    res["hermitian_template"] = distance(tmpl, hermitian) / hn;
  }
  r.finalize();
  return r;
}

SU2Tuple su2_tuple(const Multivector& theta1, const Multivector& theta2) {
  Multivector r1 = real_part(theta1), i1 = imag_part(theta1), r2 = real_part(theta2), i2 = imag_part(theta2);
  SU2Tuple t;
  t.vartheta = hodge_star(wedge(wedge(r1, i1), wedge(r2, i2)));
  t.varpi1 = wedge(r1, i1) + wedge(r2, i2);
  t.varpi2 = wedge(r1, r2) + wedge(i2, i1);
  t.varpi3 = wedge(r1, i2) + wedge(i1, r2);
  return t;
}

Vector random_chiral_spinor(Rng& rng, const CliffordRep& rep, int mu) {
  if (rep.odd()) throw Error("chiral spinors need even dimension");
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vector eta = chirality_project(rep, random_spinor(rng, rep.dim()), mu);
    if (eta.norm() > 1e-3) return eta;
  }
  throw Error("could not sample a chiral spinor");
}

Vector real_chiral_spinor(Rng& rng, const PairedModule& pm, int mu) {
  if (pm.structure.type != StructureType::real) throw Error("real spinors need a real structure");
  Vector x = random_chiral_spinor(rng, pm.rep, mu);
  Vector xi = 0.5 * (x + pm.structure(x));
  if (!chirality_of(pm.rep, xi, 1e-9)) throw Error("real structure does not preserve chirality here");
  return xi;
}

Vector pure_chiral_spinor(Rng& rng, const PairedModule& pm, int mu) {
  Vector x1 = real_chiral_spinor(rng, pm, mu);
  Vector x2 = real_chiral_spinor(rng, pm, mu);
  const Pairing& b = pm.bilinear;
  cplx b11 = b(x1, x1);
  x2 -= (b(x1, x2) / b11).real() * x1;
  cplx b22 = b(x2, x2);
  x2 *= std::sqrt((b11 / b22).real());
  return x1 + I * x2;
}

}  // namespace ka
