#include <doctest.h>

#include <cmath>

#include "ka/lowdim.hpp"

using namespace ka;

namespace {

const cplx I(0.0, 1.0);

Multivector e(Signature s, std::initializer_list<int> idx, cplx c = 1.0) {
  Blade b = 0;
  for (int i : idx) b |= Blade(1) << (i - 1);
  return Multivector::blade(s, b, c);
}

struct Case {
  Signature sig;
  int mu;
};

std::vector<Case> worked_cases() {
  std::vector<Case> out;
  for (Signature s : {Signature(2, 0), Signature(3, 0), Signature(4, 0), Signature(5, 0), Signature(6, 0),
                      Signature(8, 0), Signature(5, 1)})
    for (int mu : {1, -1}) out.push_back({s, mu});
  return out;
}

Vector sample(Rng& rng, const PairedModule& pm, int mu) {
  return pm.rep.odd() ? random_spinor(rng, pm.rep.dim()) : random_chiral_spinor(rng, pm.rep, mu);
}

const PairedModule& module_for(Case c) { return cached_paired(c.sig, c.sig.d() % 2 ? c.mu : 1); }

VerifyOptions opts_for(const PairedModule& pm, int mu) {
  VerifyOptions o;
  if (!pm.rep.odd()) o.mu = mu;
  o.sampled_betas = 2;
  return o;
}

}  // namespace

TEST_CASE("four-dimensional Hermitian template from a self-dual form") {
  Signature s(4, 0);
  Multivector w = e(s, {1, 2}) + e(s, {3, 4});
  StructureData sd;
  sd.tag = StructureTag::kahler2form;
  sd.sig = s;
  sd.mu = 1;
  sd.forms["omega"] = w;
  Multivector a = build_square_from_data(sd);
  Multivector expect = Multivector::scalar(s, 1.0) + I * w - 0.5 * wedge(w, w);
  CHECK(distance(a, expect) < 1e-14);
  const PairedModule& pm = cached_paired(s);
  VerificationReport r = verify_square({a, PairingKind::hermitian, 1.0}, pm, opts_for(pm, 1));
  CAPTURE(r.worst());
  CHECK(r.passed);
  sd.forms["omega"] = e(s, {1, 2}) - e(s, {3, 4});
  try {
    build_square_from_data(sd);
    FAIL("anti-self-dual form accepted for positive chirality");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("omega_duality") != std::string::npos);
  }
}

TEST_CASE("eight-dimensional pure Hermitian template from a Kahler form") {
  Signature s(8, 0);
  Multivector w = e(s, {1, 2}) + e(s, {3, 4}) + e(s, {5, 6}) + e(s, {7, 8});
  const double ww = inner(w, w).real();
  StructureData sd;
  sd.tag = StructureTag::pair;
  sd.sig = s;
  sd.mu = 1;
  sd.forms["omega"] = w;
  sd.forms["Theta"] = -1.0 * wedge(w, w) / std::sqrt(ww);
  Multivector a = build_square_from_data(sd);
  const double h = 0.5 * std::sqrt(ww);
  Multivector expect = h * Multivector::scalar(s, 1.0) + I * w - wedge(w, w) / std::sqrt(ww) - I * hodge_star(w) +
                       h * Multivector::volume(s);
  CHECK(distance(a, expect) < 1e-13);
  const PairedModule& pm = cached_paired(s);
  VerificationReport r = verify_square({a, PairingKind::hermitian, 1.0}, pm, opts_for(pm, 1));
  CAPTURE(r.worst());
  CHECK(r.passed);
}

TEST_CASE("Lorentzian template u (1 + i omega - mu nu)") {
  Signature s(5, 1);
  Multivector u = e(s, {5}) + e(s, {6});
  for (int mu : {1, -1}) {
    int passing = 0;
    for (int sign : {1, -1}) {
      Multivector w = e(s, {1, 2}) + double(sign) * e(s, {3, 4});
      VerificationReport lv = verify_lorentz6(u, w, mu);
      if (!lv.passed) continue;
      ++passing;
      StructureData sd;
      sd.tag = StructureTag::lorentz_pair;
      sd.sig = s;
      sd.mu = mu;
      sd.forms["u"] = u;
      sd.forms["omega"] = w;
      Multivector a = build_square_from_data(sd);
      Multivector expect = u + I * wedge(u, w) - double(mu) * hodge_star(u);
      CHECK(distance(a, expect) < 1e-14);
      const PairedModule& pm = cached_paired(s);
      VerificationReport r = verify_square({a, PairingKind::hermitian, 1.0}, pm, opts_for(pm, mu));
      CAPTURE(r.worst());
      CHECK(r.passed);
      NullFrame nf = null_frame(u, conjugate_oneform(u));
      Multivector wu = nf.screen(w);
      CHECK(std::abs(inner(wu, wu) - 2.0) < 1e-12);
      CHECK(distance(wedge(wu, wu), -2.0 * mu * Multivector::volume(wu.sig())) < 1e-12);
    }
    CHECK(passing == 1);
  }
}

TEST_CASE("random squares match the closed-form templates") {
  Rng rng(401);
  for (Case c : worked_cases()) {
    const PairedModule& pm = module_for(c);
    for (int t = 0; t < 4; ++t) {
      Vector eta = sample(rng, pm, c.mu);
      for (PairingKind kind : {PairingKind::hermitian, PairingKind::bilinear}) {
        SquareResult sq = square(pm, eta, kind);
        StructureData sd = extract_structure(sq.alpha, c.sig, c.mu, kind);
        VerificationReport tc = table_conditions(sd);
        CAPTURE(c.sig.str());
        CAPTURE(c.mu);
        CAPTURE(to_string(kind));
        CAPTURE(tc.worst());
        CHECK(tc.passed);
        Multivector rebuilt = build_square_from_data(sd);
        CHECK(distance(rebuilt, sq.alpha) < 1e-8 * sq.alpha.norm());
      }
    }
  }
}

TEST_CASE("six-dimensional bilinear square factors into isotropic one-forms") {
  Rng rng(403);
  Signature s(6, 0);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1}) {
    SquareResult b = bilinear_square(pm, random_chiral_spinor(rng, pm.rep, mu));
    StructureData sd = extract_structure(b.alpha, s, mu, PairingKind::bilinear);
    REQUIRE(sd.tag == StructureTag::iso_triple);
    REQUIRE(sd.factors.size() == 3);
    for (const auto& f : sd.factors) {
      CHECK(f.grades() == std::vector<int>{1});
      for (const auto& g : sd.factors) CHECK(std::abs(inner(f, g)) < 1e-9 * f.norm() * g.norm());
    }
    Multivector w = wedge(wedge(sd.factors[0], sd.factors[1]), sd.factors[2]);
    CHECK(distance(w, b.alpha.grade(3)) < 1e-8 * b.alpha.norm());
    CHECK(distance(hodge_star(w), I * double(mu) * w) < 1e-9 * w.norm());
  }
}

TEST_CASE("four-dimensional data: duality of omega and SU(2) relations") {
  Rng rng(405);
  Signature s(4, 0);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1})
    for (int t = 0; t < 5; ++t) {
      Vector eta = random_chiral_spinor(rng, pm.rep, mu);
      SquareResult h = hermitian_square(pm, eta);
      StructureData hd = extract_structure(h.alpha, s, mu, PairingKind::hermitian);
      const Multivector& w = hd.form("omega");
      CHECK(distance(w * I, h.alpha.grade(2)) < 1e-12 * h.alpha.norm());
      CHECK(distance(hodge_star(w), double(mu) * w) < 1e-9 * w.norm());
      StructureData bd = extract_structure(bilinear_square(pm, eta).alpha, s, mu, PairingKind::bilinear);
      REQUIRE(bd.factors.size() == 2);
      const auto& t1 = bd.factors[0];
      const auto& t2 = bd.factors[1];
      CHECK(std::abs(inner(t1, t1)) < 1e-9 * t1.norm() * t1.norm());
      CHECK(std::abs(inner(t2, t2)) < 1e-9 * t2.norm() * t2.norm());
      CHECK(std::abs(inner(t1, t2)) < 1e-9 * t1.norm() * t2.norm());
    }
}

TEST_CASE("five-dimensional Hermitian identities") {
  Rng rng(407);
  Signature s(5, 0);
  for (int ell : {1, -1}) {
    const PairedModule& pm = cached_paired(s, ell);
    for (int t = 0; t < 5; ++t) {
      SquareResult h = hermitian_square(pm, random_spinor(rng, pm.rep.dim()));
      StructureData sd = extract_structure(h.alpha, s, ell, PairingKind::hermitian);
      const Multivector& w = sd.form("omega");
      const Multivector& th = sd.form("theta");
      const double r = sd.scalar("r").real();
      const double sc = h.alpha.norm();
      CHECK(distance(th, (ell / (2.0 * r)) * hodge_star(wedge(w, w))) < 1e-9 * sc);
      CHECK(distance(inner(w, w) * hodge_star(w), wedge(w, hodge_star(wedge(w, w)))) < 1e-9 * sc * sc * sc);
      CHECK(r * ell > 0.0);
    }
  }
}

TEST_CASE("six-dimensional Hermitian identity") {
  Rng rng(409);
  Signature s(6, 0);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1})
    for (int t = 0; t < 5; ++t) {
      SquareResult h = hermitian_square(pm, random_chiral_spinor(rng, pm.rep, mu));
      StructureData sd = extract_structure(h.alpha, s, mu, PairingKind::hermitian);
      const Multivector& w = sd.form("omega");
      const double ww = inner(w, w).real();
      CHECK(distance(std::sqrt(ww) * hodge_star(w), double(mu) * std::sqrt(3.0) / 2.0 * wedge(w, w)) < 1e-9 * ww);
    }
}

TEST_CASE("Hermitian data in terms of bilinear data, dimensions two to six") {
  Rng rng(411);
  for (Case c : worked_cases()) {
    if (c.sig.q != 0 || c.sig.d() > 6) continue;
    const PairedModule& pm = module_for(c);
    for (int t = 0; t < 4; ++t) {
      Vector eta = sample(rng, pm, c.mu);
      Multivector h = hermitian_square(pm, eta).alpha;
      Multivector b = bilinear_square(pm, eta).alpha;
      Multivector bc = bilinear_square(pm, pm.structure(eta)).alpha;
      VerificationReport r = compatibility_relations(h, b, bc, c.sig, c.mu);
      CAPTURE(c.sig.str());
      CAPTURE(c.mu);
      CAPTURE(r.worst());
      CHECK(r.passed);
    }
  }
}

TEST_CASE("five-dimensional SU(2) tuple") {
  Rng rng(413);
  Signature s(5, 0);
  const PairedModule& pm = cached_paired(s);
  Multivector b = bilinear_square(pm, random_spinor(rng, pm.rep.dim())).alpha;
  StructureData sd = extract_structure(b, s, 1, PairingKind::bilinear);
  SU2Tuple tu = su2_tuple(sd.factors[0], sd.factors[1]);
  Multivector w = b.grade(2);
  CHECK(distance(tu.varpi2, 0.5 * (w + conj(w))) < 1e-9 * w.norm());
  CHECK(distance(tu.varpi3, -0.5 * I * (w - conj(w))) < 1e-9 * w.norm());
  CHECK(distance(tu.vartheta, 0.25 * hodge_star(wedge(w, conj(w)))) < 1e-9 * w.norm() * w.norm());
  CHECK(tu.vartheta.norm() > 1e-6 * w.norm() * w.norm());
}

TEST_CASE("eight-dimensional bilinear squares: impure and pure branches") {
  Rng rng(415);
  Signature s(8, 0);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1}) {
    Vector eta = random_chiral_spinor(rng, pm.rep, mu);
    Multivector a = bilinear_square(pm, eta).alpha;
    StructureData sd = extract_structure(a, s, mu, PairingKind::bilinear);
    REQUIRE(sd.tag == StructureTag::complex4form);
    VerificationReport r = verify_8d_impure(sd.scalar("lambda"), sd.form("Omega"), mu);
    CAPTURE(r.worst());
    CHECK(r.passed);

    Vector pure = pure_chiral_spinor(rng, pm, mu);
    CHECK(std::abs(pm.bilinear(pure, pure)) < 1e-10 * pure.squaredNorm());
    Multivector ap = bilinear_square(pm, pure).alpha;
    StructureData pd = extract_structure(ap, s, mu, PairingKind::bilinear);
    REQUIRE(pd.tag == StructureTag::iso_quad);
    REQUIRE(pd.factors.size() == 4);
    PluckerResult pr = plucker_factor(ap.grade(4));
    CHECK(pr.decomposability < 1e-8);
    CHECK(pr.reconstruction < 1e-8);
    CHECK(table_conditions(pd).passed);
    VerificationReport r0 = verify_8d_impure(0.0, ap.grade(4), mu);
    CHECK(r0.passed);
    CHECK(verify_8d_impure(0.0, a.grade(4), mu).residuals.at("norm") > 1e-3);
  }
}

TEST_CASE("eight-dimensional real spinor: Spin(7) case") {
  Rng rng(417);
  Signature s(8, 0);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1}) {
    Vector xi = real_chiral_spinor(rng, pm, mu);
    Multivector h = hermitian_square(pm, xi).alpha;
    StructureData hd = extract_structure(h, s, mu, PairingKind::hermitian);
    CHECK(hd.form("omega").norm() < 1e-12 * h.norm());
    CHECK(table_conditions(hd).passed);
    Multivector b = bilinear_square(pm, xi).alpha;
    StructureData bd = extract_structure(b, s, mu, PairingKind::bilinear);
    REQUIRE(bd.tag == StructureTag::complex4form);
    const Multivector& om = bd.form("Omega");
    // Omega is a constant phase times the real Cayley-type form Theta.
    cplx ph = inner(om, hd.form("Theta")) / inner(hd.form("Theta"), hd.form("Theta"));
    CHECK(distance(om, ph * hd.form("Theta")) < 1e-9 * om.norm());
    CHECK(verify_8d_impure(bd.scalar("lambda"), om, mu).passed);
  }
}

TEST_CASE("eight-dimensional normalized impure spinor") {
  Rng rng(419);
  Signature s(8, 0);
  const PairedModule& pm = cached_paired(s);
  Vector eta = random_chiral_spinor(rng, pm.rep, 1);
  cplx lam = bilinear_square(pm, eta).alpha.scalar_part();
  eta /= std::sqrt(lam);
  Multivector a = bilinear_square(pm, eta).alpha;
  CHECK(std::abs(a.scalar_part() - 1.0) < 1e-12);
  VerificationReport r = verify_8d_impure(1.0, a.grade(4), 1);
  CHECK(r.residuals.count("normalized") == 1);
  CAPTURE(r.worst());
  CHECK(r.passed);
}

TEST_CASE("conjugate one-forms") {
  Signature s(1, 1);
  Multivector u = e(s, {1}) + e(s, {2});
  Multivector v = conjugate_oneform(u);
  CHECK(distance(v, 0.5 * (e(s, {1}) - e(s, {2}))) < 1e-15);
  Signature l(5, 1);
  Rng rng(421);
  Eigen::VectorXcd x(6);
  for (int i = 0; i < 5; ++i) x(i) = rng.normal();
  x(5) = x.head(5).norm();
  Multivector un = Multivector::one_form(l, x);
  Multivector vn = conjugate_oneform(un);
  CHECK(std::abs(inner(un, vn) - 1.0) < 1e-12);
  CHECK(std::abs(inner(vn, vn)) < 1e-12);
  NullFrame nf = null_frame(un, vn);
  Multivector w = nf.unscreen(Multivector::basis(Signature(4, 0), 0, 0.7) + Multivector::basis(Signature(4, 0), 2, -0.3));
  Multivector v2 = vn - (inner(w, w) / 2.0) * un + w;
  CHECK(std::abs(inner(un, v2) - 1.0) < 1e-12);
  CHECK(std::abs(inner(v2, v2)) < 1e-12);
  Multivector top = wedge(wedge(un, vn), nf.unscreen(Multivector::volume(Signature(4, 0))));
  CHECK(distance(top, Multivector::volume(l)) < 1e-12);
  CHECK_THROWS_AS(conjugate_oneform(e(l, {1})), Error);
}

TEST_CASE("Lorentzian squares: invariants and nonvanishing") {
  Rng rng(423);
  Signature s(5, 1);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1})
    for (int t = 0; t < 10; ++t) {
      SquareResult h = hermitian_square(pm, random_chiral_spinor(rng, pm.rep, mu));
      StructureData sd = extract_structure(h.alpha, s, mu, PairingKind::hermitian);
      const Multivector& u = sd.form("u");
      const Multivector& w = sd.form("omega");
      VerificationReport r = verify_lorentz6(u, w, mu);
      CAPTURE(r.worst());
      CHECK(r.passed);
      CHECK(u.norm() > 1e-6);
      CHECK(w.norm() > 1e-6);
      NullFrame nf = null_frame(u, sd.form("v"));
      Multivector wu = nf.screen(w);
      CHECK(std::abs(inner(wu, wu) - 2.0) < 1e-9);
      CHECK(distance(wedge(wu, wu), -2.0 * mu * Multivector::volume(wu.sig())) < 1e-9);
      CHECK(distance(hodge_star(wu), -double(mu) * wu) < 1e-9);
    }
}

TEST_CASE("Plucker factorization rejects indecomposable forms") {
  Signature s(4, 0);
  Multivector w = e(s, {1, 2}) + e(s, {3, 4});
  CHECK(decomposability_residual(w) > 0.1);
  CHECK_THROWS_AS(plucker_factor(w), Error);
  Multivector d = wedge(e(s, {1}) + 2.0 * e(s, {3}), e(s, {2}, I) - e(s, {4}));
  PluckerResult pr = plucker_factor(d);
  CHECK(pr.reconstruction < 1e-14);
  CHECK(pr.factors.size() == 2);
  CHECK_THROWS_AS(plucker_factor(w + e(s, {1})), Error);
}

TEST_CASE("structure tags round trip through strings") {
  for (StructureTag t : {StructureTag::scalar, StructureTag::lorentz_pair, StructureTag::iso_quad})
    CHECK(structure_tag_from_string(to_string(t)) == t);
  CHECK_THROWS_AS(structure_tag_from_string("nope"), Error);
  CHECK_THROWS_AS(extract_structure(Multivector::scalar(Signature(7, 0), 1.0), Signature(7, 0), 1,
                                    PairingKind::hermitian),
                  Error);
}
