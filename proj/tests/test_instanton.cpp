#include <doctest.h>

#include "ka/instanton.hpp"

using namespace ka;

namespace {

struct Case {
  Signature sig;
  int mu;
};

std::vector<Case> all_cases() {
  std::vector<Case> out;
  for (Signature s : {Signature(2, 0), Signature(3, 0), Signature(4, 0), Signature(5, 0), Signature(6, 0),
                      Signature(8, 0), Signature(5, 1)})
    for (int mu : {1, -1}) out.push_back({s, mu});
  return out;
}

const PairedModule& module_for(Case c) { return cached_paired(c.sig, c.sig.d() % 2 ? c.mu : 1); }

Vector sample(Rng& rng, const PairedModule& pm, int mu) {
  Vector e = pm.rep.odd() ? random_spinor(rng, pm.rep.dim()) : random_chiral_spinor(rng, pm.rep, mu);
  return e / e.norm();
}

StructureData hermitian_data(const PairedModule& pm, const Vector& eta, int mu) {
  return extract_structure(hermitian_square(pm, eta).alpha, pm.rep.sig(), mu, PairingKind::hermitian);
}

std::vector<int> degrees_for(Signature s) {
  if (s == Signature(5, 1)) return {3};
  if (s == Signature(2, 0)) return {2};
  return {2, 3};
}

}  // namespace

TEST_CASE("zero forms satisfy every row") {
  Rng rng(501);
  for (Case c : all_cases()) {
    const PairedModule& pm = module_for(c);
    StructureData sd = hermitian_data(pm, sample(rng, pm, c.mu), c.mu);
    for (int k : degrees_for(c.sig)) {
      ConditionReport r = k == 2 ? instanton_residual(Multivector(c.sig), sd) : curving_residual(Multivector(c.sig), sd);
      CHECK(r.passed);
      CHECK(r.worst() == 0.0);
      CHECK(r.dimension_case == condition_case_for(c.sig));
    }
    CHECK(clifford_kernel_oracle(Multivector(c.sig), sample(rng, pm, c.mu), pm.rep) == 0.0);
  }
}

TEST_CASE("dimension two: only F = 0") {
  Rng rng(503);
  const PairedModule& pm = cached_paired(Signature(2, 0));
  for (int mu : {1, -1}) {
    Vector eta = sample(rng, pm, mu);
    CHECK(kernel_dimension(eta, pm.rep, 2) == 0);
    Multivector F = random_form(rng, Signature(2, 0), 2);
    ConditionReport r = instanton_residual(F, hermitian_data(pm, eta, mu));
    CHECK_FALSE(r.passed);
    CHECK(r.residuals.at("F") == doctest::Approx(1.0));
  }
}

TEST_CASE("dimension three: only H = 0") {
  Rng rng(505);
  for (int ell : {1, -1}) {
    const PairedModule& pm = cached_paired(Signature(3, 0), ell);
    Vector eta = sample(rng, pm, ell);
    CHECK(kernel_dimension(eta, pm.rep, 3) == 0);
    ConditionReport r = curving_residual(random_form(rng, Signature(3, 0), 3), hermitian_data(pm, eta, ell));
    CHECK_FALSE(r.passed);
  }
}

TEST_CASE("four dimensions: real forms of the opposite duality pass") {
  Rng rng(507);
  Signature s(4, 0);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1}) {
    Vector eta = sample(rng, pm, mu);
    StructureData sd = hermitian_data(pm, eta, mu);
    Multivector F = random_real_form(rng, s, 2);
    F = 0.5 * (F - double(mu) * hodge_star(F));
    const Multivector& w = sd.form("omega");
    CHECK(wedge(F, w).norm() < 1e-12);
    CHECK(generalized_product(F, w, 1).norm() < 1e-12);
    ConditionReport r = instanton_residual(F, sd);
    CAPTURE(r.worst());
    CHECK(r.passed);
    CHECK(clifford_kernel_oracle(F, eta, pm.rep) < 1e-12);
    Multivector G = 0.5 * (F + double(mu) * hodge_star(random_real_form(rng, s, 2)));
    CHECK_FALSE(instanton_residual(G, sd).passed);
  }
}

TEST_CASE("four dimensions: real kernel is the space of opposite-dual forms") {
  Rng rng(509);
  Signature s(4, 0);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1})
    for (int t = 0; t < 5; ++t) {
      Vector eta = sample(rng, pm, mu);
      StructureData sd = hermitian_data(pm, eta, mu);
      Matrix a = row_system_map(sd, 2);
      Matrix real(2 * a.rows(), a.cols());
      real << a.real().cast<cplx>(), a.imag().cast<cplx>();
      Matrix k = nullspace(real);
      REQUIRE(k.cols() == 3);
      for (Eigen::Index j = 0; j < k.cols(); ++j) {
        Multivector F = form_from_coordinates(s, k.col(j), 2);
        CHECK(distance(hodge_star(F), -double(mu) * F) < 1e-10 * F.norm());
      }
    }
}

TEST_CASE("random forms and random spinors are not in the kernel") {
  Rng rng(511);
  for (Case c : all_cases()) {
    const PairedModule& pm = module_for(c);
    for (int k : degrees_for(c.sig)) {
      double o = clifford_kernel_oracle(random_form(rng, c.sig, k), sample(rng, pm, c.mu), pm.rep);
      CAPTURE(c.sig.str());
      CHECK(o > 1e-3);
    }
  }
}

TEST_CASE("kernel basis elements are annihilated and pass the rows") {
  Rng rng(513);
  for (Case c : all_cases()) {
    const PairedModule& pm = module_for(c);
    Vector eta = sample(rng, pm, c.mu);
    StructureData sd = hermitian_data(pm, eta, c.mu);
    for (int k : degrees_for(c.sig)) {
      Matrix basis = nullspace(clifford_kernel_map(eta, pm.rep, k));
      for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        Multivector X = form_from_coordinates(c.sig, basis.col(j), k);
        CAPTURE(c.sig.str());
        CAPTURE(k);
        CHECK(clifford_kernel_oracle(X, eta, pm.rep) < 1e-10);
        ConditionReport r = k == 2 ? instanton_residual(X, sd) : curving_residual(X, sd);
        CAPTURE(r.worst());
        CHECK(r.passed);
      }
    }
  }
}

TEST_CASE("row systems and Clifford kernels have the same nullspace") {
  Rng rng(515);
  for (Case c : all_cases()) {
    const PairedModule& pm = module_for(c);
    for (int t = 0; t < 3; ++t) {
      Vector eta = sample(rng, pm, c.mu);
      for (int k : degrees_for(c.sig)) {
        EquivalenceReport r = nullspace_equivalence(eta, pm, c.mu, k);
        CAPTURE(c.sig.str());
        CAPTURE(c.mu);
        CAPTURE(k);
        CAPTURE(r.kernel_dim);
        CAPTURE(r.system_dim);
        CAPTURE(r.system_on_kernel);
        CAPTURE(r.kernel_on_system);
        CHECK(r.passed);
      }
    }
  }
}

TEST_CASE("kernel dimensions") {
  Rng rng(517);
  const int expect2[] = {0, 1, 4, 6, 11, 0, 21};
  const int expect3[] = {0, 0, 2, 6, 16, 0, 48};
  int i = 0;
  for (Signature s : {Signature(2, 0), Signature(3, 0), Signature(4, 0), Signature(5, 0), Signature(6, 0),
                      Signature(7, 0), Signature(8, 0)}) {
    const PairedModule& pm = cached_paired(s);
    if (s.d() != 7) {
      Vector eta = sample(rng, pm, 1);
      CHECK(kernel_dimension(eta, pm.rep, 2) == expect2[i]);
      if (s.d() > 2) CHECK(kernel_dimension(eta, pm.rep, 3) == expect3[i]);
    }
    ++i;
  }
  CHECK_THROWS_AS(kernel_dimension(Vector::Zero(2), cached_paired(Signature(2, 0)).rep, 2), Error);
}

TEST_CASE("eight dimensions, real spinor: the Theta contraction row is redundant") {
  Rng rng(519);
  Signature s(8, 0);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1}) {
    Vector xi = real_chiral_spinor(rng, pm, mu);
    xi /= xi.norm();
    StructureData sd = hermitian_data(pm, xi, mu);
    REQUIRE(sd.form("omega").norm() < 1e-12);
    Matrix reduced = nullspace(row_system_map(sd, 2, {"four_form"}));
    Matrix full = row_system_map(sd, 2);
    CHECK(reduced.cols() == nullspace(full).cols());
    for (Eigen::Index j = 0; j < reduced.cols(); ++j) {
      Multivector F = form_from_coordinates(s, reduced.col(j), 2);
      CHECK(generalized_product(F, sd.form("Theta"), 1).norm() < 1e-10);
    }
  }
}

TEST_CASE("Lorentzian curving: self-dual H always passes") {
  Rng rng(521);
  Signature s(5, 1);
  const PairedModule& pm = cached_paired(s);
  for (int mu : {1, -1})
    for (int t = 0; t < 10; ++t) {
      Vector eta = sample(rng, pm, mu);
      StructureData sd = hermitian_data(pm, eta, mu);
      Multivector H = random_form(rng, s, 3);
      H = 0.5 * (H + double(mu) * hodge_star(H));
      REQUIRE(distance(hodge_star(H), double(mu) * H) < 1e-12 * H.norm());
      ConditionReport r = curving_residual(H, sd);
      CAPTURE(r.worst());
      CHECK(r.passed);
      CHECK(clifford_kernel_oracle(H, eta, pm.rep) < 1e-12);
      Multivector G = 0.5 * (H - double(mu) * hodge_star(H)) + random_form(rng, s, 3);
      CHECK_FALSE(curving_residual(G, sd).passed);
    }
}

TEST_CASE("Lorentzian curving: flat product example") {
  Rng rng(523);
  const PairedModule& pm = cached_paired(Signature(5, 1));
  for (int mu : {1, -1})
    for (int t = 0; t < 3; ++t) {
      ConditionReport r = flat_lorentz_example(sample(rng, pm, mu), pm, mu, rng, 6);
      CAPTURE(r.worst());
      CHECK(r.passed);
      CHECK(r.residuals.size() == 4);
    }
}

TEST_CASE("row names and case tags") {
  Rng rng(525);
  const PairedModule& pm = cached_paired(Signature(8, 0));
  StructureData sd = hermitian_data(pm, sample(rng, pm, 1), 1);
  Rows rows = instanton_rows(random_form(rng, Signature(8, 0), 2), sd);
  std::vector<std::string> names;
  for (const auto& r : rows) names.push_back(r.first);
  CHECK(names == std::vector<std::string>{"pairing", "two_form", "four_form", "six_form"});
  for (ConditionCase c : {ConditionCase::d2, ConditionCase::d5, ConditionCase::d6_lorentz})
    CHECK(condition_case_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(condition_case_for(Signature(7, 0)), Error);
  StructureData bd = extract_structure(bilinear_square(pm, sample(rng, pm, 1)).alpha, Signature(8, 0), 1,
                                       PairingKind::bilinear);
  CHECK_THROWS_AS(instanton_residual(random_form(rng, Signature(8, 0), 2), bd), Error);
  const PairedModule& pl = cached_paired(Signature(5, 1));
  StructureData ld = hermitian_data(pl, sample(rng, pl, 1), 1);
  CHECK_THROWS_AS(instanton_residual(random_form(rng, Signature(5, 1), 2), ld), Error);
}
