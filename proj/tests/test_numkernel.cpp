#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stc/numkernel.hpp"

using namespace stc;

namespace {

Mat diag2(Complex a, Complex b) {
  Mat m = zeros(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("kron basics") {
  Mat a = diag2(1, 2), b = diag2(3, 4);
  Mat k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 0) == Complex(3, 0));
  CHECK(k(1, 1) == Complex(4, 0));
  CHECK(k(2, 2) == Complex(6, 0));
  CHECK(k(3, 3) == Complex(8, 0));
  CHECK(approx_equal(kron(ident(1), a), a));
  CHECK(approx_equal(kron(ident(2), ident(2)), ident(4)));

  // exact reassociation for integer entries
  Rng rng(7);
  Mat x(2, 3), y(3, 2), z(2, 2);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = Complex(rng.integer(-3, 3), rng.integer(-3, 3));
  for (int i = 0; i < y.size(); ++i) y.data()[i] = Complex(rng.integer(-3, 3), rng.integer(-3, 3));
  for (int i = 0; i < z.size(); ++i) z.data()[i] = Complex(rng.integer(-3, 3), rng.integer(-3, 3));
  Mat lhs = kron(kron(x, y), z), rhs = kron(x, kron(y, z));
  CHECK(max_abs_diff(lhs, rhs) == 0.0);

  // mixed-product law
  Mat p = rng.matrix(3, 2), q = rng.matrix(2, 2);
  CHECK(approx_equal(Mat(kron(x, z) * kron(p, q)), kron(Mat(x * p), Mat(z * q))));
}

TEST_CASE("nullspace") {
  CHECK(nullspace(ident(3)).cols() == 0);
  Mat ns0 = nullspace(zeros(2, 2));
  REQUIRE(ns0.cols() == 2);
  CHECK(approx_equal(Mat(ns0.adjoint() * ns0), ident(2)));

  Mat a(2, 2);
  a << 1, 1, 1, 1;
  Mat ns = nullspace(a);
  REQUIRE(ns.cols() == 1);
  CHECK(std::abs(std::abs(ns(0, 0)) - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(ns(0, 0) + ns(1, 0)) < 1e-12);
  CHECK(approx_zero(Mat(a * ns)));
}

TEST_CASE("orthonormal_range") {
  CHECK(approx_equal(orthonormal_range(ident(2)), ident(2)));

  Mat p = diag2(1, 0);
  Mat v = orthonormal_range(p);
  REQUIRE(v.cols() == 1);
  CHECK(std::abs(v(0, 0) - Complex(1, 0)) < 1e-12);

  Mat q(2, 2);
  q << 0.5, 0.5, 0.5, 0.5;
  Mat w = orthonormal_range(q);
  REQUIRE(w.cols() == 1);
  CHECK(std::abs(w(0, 0) - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(w(1, 0) - 1 / std::sqrt(2.0)) < 1e-12);

  Mat bad(2, 2);
  bad << 1, 1, 0, 1;
  CHECK_THROWS_WITH_AS(orthonormal_range(bad), doctest::Contains("NotAProjection"), Error);

  // random projections q q* from normalized isometries
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    int n = rng.integer(2, 6);
    int r = rng.integer(1, n);
    Mat m = rng.matrix(n, r);
    Eigen::HouseholderQR<Mat> qr(m);
    Mat iso = (qr.householderQ() * Mat::Identity(n, r)).eval();
    Mat proj = iso * iso.adjoint();
    Mat u = orthonormal_range(proj);
    REQUIRE(u.cols() == r);
    CHECK(max_abs_diff(Mat(u * u.adjoint()), proj) < 1e-8);
    CHECK(max_abs_diff(Mat(u.adjoint() * u), ident(r)) < 1e-10);
  }
}

TEST_CASE("approx_equal policy") {
  Mat m = ident(3);
  CHECK(approx_equal(m, m));
  Mat tiny = Mat::Constant(2, 2, Complex(1e-12, 0));
  CHECK(approx_equal(zeros(2, 2), tiny));
  CHECK_FALSE(approx_equal(ident(2), Mat(2 * ident(2))));
  CHECK_THROWS_WITH_AS(approx_equal(ident(2), ident(3)), doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("fix_phase and op_norm") {
  Mat v(2, 1);
  v << Complex(0, 1), Complex(1, 0);
  Mat f = fix_phase(v);
  CHECK(std::abs(f(0, 0).imag()) < 1e-12);
  CHECK(f(0, 0).real() > 0);

  Mat a = diag2(3, -4);
  CHECK(std::abs(op_norm(a) - 4.0) < 1e-12);
}

TEST_CASE("rng determinism and unitarity") {
  Rng r1(42), r2(42);
  Mat u1 = r1.unitary(4), u2 = r2.unitary(4);
  CHECK(max_abs_diff(u1, u2) == 0.0);
  CHECK(is_unitary(u1));
}

TEST_CASE("two-leg gate matches explicit kron") {
  Rng rng(3);
  int d = 2, n = 3;
  Mat c = rng.matrix(d * d, d * d);
  Mat m = rng.matrix(8, 5);
  for (int pos = 0; pos <= n - 2; ++pos) {
    Mat big = pos == 0 ? kron(c, ident(2)) : kron(ident(2), c);
    CHECK(approx_equal(apply_two_leg_gate(c, m, d, n, pos), Mat(big * m)));
  }

  std::vector<int> idx = unflatten_index(6, 2, 3);
  CHECK(idx == std::vector<int>{1, 1, 0});
  CHECK(flatten_index(idx, 2) == 6);
}
