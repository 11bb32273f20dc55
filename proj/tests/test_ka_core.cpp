#include <doctest.h>

#include "ka/multivector.hpp"
#include "ka/sampling.hpp"

using namespace ka;

namespace {

const cplx I(0.0, 1.0);

Multivector e(Signature s, std::initializer_list<int> idx, cplx c = 1.0) {
  Blade b = 0;
  for (int i : idx) b |= Blade(1) << (i - 1);
  return Multivector::blade(s, b, c);
}

}  // namespace

TEST_CASE("wedge basics") {
  Signature s(3, 0);
  CHECK((e(s, {1}) ^ e(s, {1})).empty());
  CHECK(distance(e(s, {1}) ^ e(s, {2}), e(s, {1, 2})) == 0.0);
  Multivector one = Multivector::scalar(s, 1.0);
  CHECK(distance((one + e(s, {1})) ^ e(s, {2}), e(s, {2}) + e(s, {1, 2})) == 0.0);
  CHECK(distance(e(s, {2}) ^ e(s, {1}), -e(s, {1, 2})) == 0.0);
  CHECK_THROWS_AS(wedge(e(s, {1}), e(Signature(2, 1), {1})), Error);
}

TEST_CASE("wedge is graded commutative and associative") {
  Rng rng(11);
  Signature s(3, 2);
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b) {
      Multivector x = random_form(rng, s, a), y = random_form(rng, s, b);
      double sign = ((a * b) % 2) ? -1.0 : 1.0;
      CHECK(distance(x ^ y, sign * (y ^ x)) < 1e-12);
    }
  Multivector x = random_form(rng, s), y = random_form(rng, s), z = random_form(rng, s);
  CHECK(distance((x ^ y) ^ z, x ^ (y ^ z)) < 1e-11);
}

TEST_CASE("interior product") {
  Signature s(3, 0);
  CHECK(distance(interior(e(s, {1}), e(s, {1, 2})), e(s, {2})) == 0.0);
  CHECK(interior(e(s, {1}), e(s, {2, 3})).empty());
  Signature l(1, 1);
  CHECK(distance(interior(e(l, {2}), e(l, {2})), Multivector::scalar(l, -1.0)) == 0.0);
  CHECK_THROWS_AS(interior(e(s, {1, 2}), e(s, {1})), Error);
}

TEST_CASE("generalized products") {
  Signature s(3, 0);
  Rng rng(5);
  Multivector w = random_form(rng, Signature(4, 1), 2);
  CHECK(std::abs(generalized_product(w, w, 2).scalar_part() - inner(w, w)) < 1e-12);
  CHECK(generalized_product(w, w, 2).grades(1e-12) == std::vector<int>{0});
  Multivector a = random_form(rng, s), b = random_form(rng, s);
  CHECK(distance(generalized_product(a, b, 0), a ^ b) < 1e-12);
  // overlap index 2 contributes with the sign of moving e2 to the front of e1^e2
  CHECK(distance(generalized_product(e(s, {1, 2}), e(s, {2, 3}), 1), -e(s, {1, 3})) < 1e-14);
  CHECK(generalized_product(e(s, {1}), e(s, {1, 2}), 2).empty());
}

TEST_CASE("generalized product symmetry") {
  Rng rng(7);
  for (Signature s : {Signature(4, 0), Signature(3, 2), Signature(2, 4)}) {
    for (int a = 0; a <= s.d(); ++a)
      for (int b = 0; b <= s.d(); ++b)
        for (int k = 0; k <= std::min(a, b); ++k) {
          Multivector x = random_form(rng, s, a), y = random_form(rng, s, b);
          double sign = (((a - k) * (b - k)) % 2) ? -1.0 : 1.0;
          CHECK(distance(generalized_product(x, y, k), sign * generalized_product(y, x, k)) < 1e-11);
        }
  }
}

TEST_CASE("geometric product examples") {
  Signature s(2, 0);
  CHECK(distance(geometric_product(e(s, {1}), e(s, {1})), Multivector::scalar(s, 1.0)) == 0.0);
  Rng rng(3);
  Multivector a = random_form(rng, s);
  CHECK(distance(geometric_product(Multivector::scalar(s, 1.0), a), a) < 1e-15);
  Multivector x = Multivector::scalar(s, 1.0) + I * Multivector::volume(s);
  CHECK(distance(geometric_product(x, x), 2.0 * x) < 1e-14);
  Signature l(1, 1);
  CHECK(distance(geometric_product(e(l, {2}), e(l, {2})), Multivector::scalar(l, -1.0)) == 0.0);
}

TEST_CASE("Clifford relation at algebra level") {
  for (int d = 1; d <= 10; ++d)
    for (int p = 0; p <= d; ++p) {
      Signature s(p, d - p);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          Multivector ei = Multivector::basis(s, i), ej = Multivector::basis(s, j);
          Multivector ac = geometric_product(ei, ej) + geometric_product(ej, ei);
          Multivector expect(s);
          if (i == j) expect = Multivector::scalar(s, 2.0 * s.metric(i));
          CHECK(distance(ac, expect) == 0.0);
        }
    }
}

TEST_CASE("geometric product agrees with generalized product expansion") {
  Rng rng(17);
  for (Signature s : {Signature(2, 0), Signature(3, 0), Signature(1, 3), Signature(4, 2), Signature(3, 4)}) {
    for (int t = 0; t < 3; ++t) {
      Multivector a = random_form(rng, s), b = random_form(rng, s);
      CHECK(distance(geometric_product(a, b), geometric_product_expanded(a, b)) < 1e-10 * a.norm() * b.norm());
    }
    Multivector th = random_form(rng, s, 1), a = random_form(rng, s);
    CHECK(distance(geometric_product(th, a), wedge(th, a) + interior(th, a)) < 1e-12 * a.norm() * th.norm());
  }
}

TEST_CASE("geometric product is associative") {
  Rng rng(19);
  for (Signature s : {Signature(3, 0), Signature(5, 1), Signature(2, 5), Signature(8, 0)}) {
    Multivector a = random_form(rng, s), b = random_form(rng, s), c = random_form(rng, s);
    Multivector l = geometric_product(geometric_product(a, b), c);
    Multivector r = geometric_product(a, geometric_product(b, c));
    CHECK(distance(l, r) < 1e-10 * a.norm() * b.norm() * c.norm());
  }
}

TEST_CASE("involutions") {
  Signature s(3, 0);
  CHECK(distance(parity(e(s, {1, 2})), e(s, {1, 2})) == 0.0);
  CHECK(distance(parity(e(s, {1})), -e(s, {1})) == 0.0);
  CHECK(distance(reversion(e(s, {1, 2, 3})), -e(s, {1, 2, 3})) == 0.0);
  CHECK(distance(conj(e(s, {1}, I)), e(s, {1}, -I)) == 0.0);
  Rng rng(1);
  Multivector a = random_form(rng, s);
  CHECK(distance(parity(reversion(a)), reversion(parity(a))) == 0.0);
}

TEST_CASE("Hodge star") {
  Signature s(2, 0);
  CHECK(distance(hodge_star(Multivector::scalar(s, 1.0)), Multivector::volume(s)) == 0.0);
  CHECK(distance(hodge_star(e(s, {1})), e(s, {2})) == 0.0);
}

TEST_CASE("volume form lemma") {
  Rng rng(23);
  for (int d = 1; d <= 7; ++d)
    for (int p = 0; p <= d; ++p) {
      Signature s(p, d - p);
      Multivector nu = Multivector::volume(s);
      for (int t = 0; t < 5; ++t) {
        Multivector a = random_form(rng, s);
        CHECK(distance(geometric_product(a, nu), hodge_star(reversion(a))) < 1e-10 * a.norm());
        Multivector pt = reversion(a);
        if ((d - 1) % 2) pt = parity(pt);
        CHECK(distance(geometric_product(nu, a), hodge_star(pt)) < 1e-10 * a.norm());
      }
    }
}

TEST_CASE("generalized product with Hodge dual") {
  Rng rng(29);
  for (Signature s : {Signature(4, 0), Signature(3, 2), Signature(2, 3)}) {
    for (int a = 0; a <= s.d(); ++a)
      for (int b = 0; a + b <= s.d(); ++b) {
        Multivector x = random_form(rng, s, a), y = random_form(rng, s, b);
        CHECK(distance(generalized_product(x, hodge_star(y), a), hodge_star(y ^ x)) < 1e-11);
      }
  }
}

TEST_CASE("Kahler-Atiyah trace") {
  Signature s(4, 0);
  CHECK(ka_trace(Multivector::scalar(s, 1.0)) == cplx(4.0));
  CHECK(ka_trace(e(s, {1, 2})) == cplx(0.0));
  CHECK(ka_trace(Multivector::scalar(s, 3.0) + e(s, {1}, 5.0)) == cplx(12.0));
  Rng rng(31);
  for (Signature t : {Signature(3, 0), Signature(2, 2), Signature(5, 1)}) {
    Multivector a = random_form(rng, t), b = random_form(rng, t);
    CHECK(std::abs(ka_trace(geometric_product(a, b)) - ka_trace(geometric_product(b, a))) < 1e-10 * a.norm() * b.norm());
  }
}

TEST_CASE("complex volume form") {
  CHECK(distance(complex_volume(Signature(2, 0)), e(Signature(2, 0), {1, 2}, I)) == 0.0);
  CHECK(distance(complex_volume(Signature(5, 1)), Multivector::volume(Signature(5, 1))) == 0.0);
  CHECK(distance(complex_volume(Signature(3, 0)), e(Signature(3, 0), {1, 2, 3}, I)) == 0.0);
  for (int d = 1; d <= 10; ++d)
    for (int p = 0; p <= d; ++p) {
      Signature s(p, d - p);
      Multivector n = complex_volume(s);
      CHECK(distance(geometric_product(n, n), Multivector::scalar(s, 1.0)) < 1e-14);
    }
}

TEST_CASE("inner product and grades") {
  Signature s(1, 1);
  CHECK(inner(e(s, {2}), e(s, {2})) == cplx(-1.0));
  CHECK(inner(e(s, {1, 2}), e(s, {1, 2})) == cplx(-1.0));
  Rng rng(2);
  Multivector a = random_form(rng, Signature(4, 0), 2) + Multivector::scalar(Signature(4, 0), 1.0);
  CHECK(a.grades(1e-12) == std::vector<int>{0, 2});
}

TEST_CASE("outermorphism") {
  Signature s(3, 0);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(3, 3);
  Rng rng(4);
  Multivector a = random_form(rng, s);
  CHECK(distance(outermorphism(M, a), a) < 1e-15);
  M.setZero();
  M(1, 0) = 1.0;
  M(0, 1) = 1.0;
  M(2, 2) = 1.0;
  CHECK(distance(outermorphism(M, e(s, {1, 2})), -e(s, {1, 2})) == 0.0);
  CHECK(distance(outermorphism(M, e(s, {1, 3})), e(s, {2, 3})) == 0.0);
}
