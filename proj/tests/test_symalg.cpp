#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stc/symalg.hpp"

using namespace stc;

TEST_CASE("symmetric power components and isometries") {
  auto q8 = builtin("Q8");
  RepObject z = rep_from_irrep(q8, 4);
  GradedObject g = symmetric_powers(z, 3);
  REQUIRE(g.components.size() == 4);
  // binomial dims for a 2-dim base: 1, 2, 3, 4
  for (int i = 0; i <= 3; ++i) CHECK(g.dim(i) == i + 1);
  // degree 0 is the unit, degree 1 the object itself, on the nose
  CHECK(g.dim(0) == 1);
  CHECK(max_abs_diff(g.components[1].u, ident(2)) == 0.0);
  for (int g0 = 0; g0 < 8; ++g0)
    CHECK(max_abs_diff(g.components[1].space.at(g0), z.at(g0)) == 0.0);
  for (int i = 2; i <= 3; ++i) {
    const Mat& u = g.components[i].u;
    CHECK(max_abs_diff(Mat(u.adjoint() * u), ident(g.dim(i))) < 1e-10);
    // u u* is the symmetrizer of that degree
    Mat proj = symmetrizer(z, i, SymmetryKind::plain).mat;
    CHECK(max_abs_diff(Mat(u * u.adjoint()), proj) < 1e-10);
  }
  // a three dimensional base: dims follow C(n+2, n)
  auto s4 = builtin("S4");
  GradedObject g3 = symmetric_powers(rep_from_irrep(s4, 2), 2);
  CHECK(g3.dim(1) == 3);
  CHECK(g3.dim(2) == 6);
}

TEST_CASE("graded multiplication laws") {
  auto q8 = builtin("Q8");
  RepObject z = rep_from_irrep(q8, 4);
  GradedObject g = symmetric_powers(z, 3);
  auto m = mult_maps(g);
  CHECK(max_abs_diff(m[0][0], ident(1)) == 0.0);
  CHECK(max_abs_diff(m[2][0], ident(3)) < 1e-12);

  auto rep = verify_mult_maps(g);
  CHECK(rep.pass);
  CHECK(rep.assoc_residual < 1e-9);
  CHECK(rep.comm_residual < 1e-9);
  CHECK(rep.unit_residual < 1e-12);

  // commutation through the symmetry, spelled out at degree (1,1)
  Mat c = symmetry(z, z, SymmetryKind::plain).mat;
  CHECK(max_abs_diff(Mat(m[1][1] * c), m[1][1]) < 1e-12);

  CHECK_THROWS_WITH_AS(graded_mult(g, 2, 2), doctest::Contains("DegreeOverflow"), Error);
}

TEST_CASE("dense product monoids") {
  auto s3 = builtin("S3");
  MonoidObject reg = regular_monoid(s3).monoid;
  auto rep = verify_monoid(reg);
  CHECK(rep.pass);

  // the trivial monoid is a unit for the direct product
  MonoidObject prod = product_monoid(trivial_monoid(s3), reg);
  CHECK(max_abs_diff(prod.m.mat, reg.m.mat) < 1e-14);
  CHECK(max_abs_diff(prod.eta.mat, reg.eta.mat) < 1e-14);

  MonoidObject sq = product_monoid(reg, reg);
  auto rep2 = verify_monoid(sq);
  CHECK(rep2.pass);
  CHECK(rep2.comm_residual < 1e-9);
  CHECK(is_morphism(sq.m, Tolerance{}));
  CHECK(is_morphism(sq.eta, Tolerance{}));
}

TEST_CASE("graded power monoid agrees with its dense assembly") {
  auto q8 = builtin("Q8");
  RepObject z = rep_from_irrep(q8, 4);
  GradedObject g = symmetric_powers(z, 2);
  GradedMonoid q = graded_power_monoid(g, 2);
  MonoidObject dense = dense_monoid(q);
  CHECK(dense.carrier.dim == 36);  // (1+2+3)^2
  auto rep = verify_monoid(dense);
  CHECK(rep.pass);
  CHECK(rep.assoc_residual < 1e-9);
  CHECK(rep.comm_residual < 1e-9);
  CHECK(is_morphism(dense.m, Tolerance{}));
  // the unit is the basis vector at multidegree zero
  CHECK(std::abs(dense.eta.mat(0, 0) - Complex(1, 0)) < 1e-14);
  CHECK(dense.eta.mat.cwiseAbs().sum() == doctest::Approx(1.0));

  // unit behaves as identity under componentwise application too
  GradedMor unit = monoid_unit(q);
  GradedMor some;
  some.src_dim = 2;
  some.comps[MultiDeg{1, 0}] = ident(2);
  GradedMor prod = monoid_apply(q, unit, some);
  CHECK(graded_distance(prod, some) < 1e-14);
}

TEST_CASE("absorption morphisms on the spinor object") {
  auto q8 = builtin("Q8");
  RepObject z = rep_from_irrep(q8, 4);
  GradedObject g = symmetric_powers(z, 2);
  auto res = absorption_morphisms(z, g);
  CHECK(res.report.d == 2);
  CHECK(res.report.pass);
  CHECK(res.report.f_norm > 0.9);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) CHECK(res.report.residuals[j][i] < 1e-9);

  // off diagonal compositions vanish identically, diagonal ones give f
  GradedMonoid q = graded_power_monoid(g, 2);
  GradedMor diag =
      graded_compose(monoid_apply(q, res.data.t[0], res.data.u[0]), res.data.s);
  CHECK(graded_distance(diag, res.data.f) < 1e-12);

  // an object with nontrivial determinant is rejected
  auto d4 = builtin("D4");
  RepObject w = rep_from_irrep(d4, 4);
  GradedObject gw = symmetric_powers(w, 2);
  CHECK_THROWS_WITH_AS(absorption_morphisms(w, gw), doctest::Contains("DetNotTrivial"),
                       Error);
  CHECK_THROWS_WITH_AS(absorption_morphisms(z, symmetric_powers(z, 1)),
                       doctest::Contains("DegreeOverflow"), Error);
}

TEST_CASE("invariant grading matches character averages") {
  auto s3 = builtin("S3");
  GradedObject g = symmetric_powers(rep_from_irrep(s3, 2), 3);
  auto gam = gamma_grading(g);
  REQUIRE(gam.size() == 4);
  CHECK(gam[0] == 1);
  CHECK(gam[1] == 0);
  CHECK(gam[2] == 1);
  // cross check every degree against the character average of the component
  for (int i = 0; i <= 3; ++i) {
    Complex avg = 0;
    for (int e = 0; e < 6; ++e) avg += g.components[i].space.at(e).trace();
    avg /= 6.0;
    CHECK(std::abs(avg - Complex(gam[i], 0)) < 1e-10);
  }
}

TEST_CASE("function algebra monoid splits every irrep") {
  for (const char* name : {"Z2", "Z3", "Z4", "S3", "D4", "Q8"}) {
    auto cat = builtin(name);
    auto res = regular_monoid(cat);
    CHECK(res.report.pass);
    CHECK(res.report.axioms.assoc_residual < 1e-9);
    CHECK(res.report.hom_unit_dim == 1);
    CHECK(res.report.end_module_dim == 1);
    CHECK(res.report.gamma_residual < 1e-9);
    REQUIRE(res.report.splits.size() == cat->irreps.size());
    for (const auto& s : res.report.splits) {
      CHECK(s.multiplicity == cat->irreps[s.irrep_index].dim);
      CHECK(s.isometry_residual < 1e-9);
      CHECK(s.module_law_residual < 1e-9);
      CHECK(s.completeness_residual < 1e-9);
    }
  }
  // the one element group gives the trivial monoid
  auto z1 = builtin("Z1");
  auto res = regular_monoid(z1);
  CHECK(res.monoid.carrier.dim == 1);
  CHECK(res.report.pass);
}

TEST_CASE("larger group: the full permutation group on four letters") {
  auto s4 = builtin("S4");
  auto res = regular_monoid(s4);
  CHECK(res.report.pass);
  for (const auto& s : res.report.splits)
    CHECK(s.multiplicity == s4->irreps[s.irrep_index].dim);
}
