#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stc/statrep.hpp"

using namespace stc;

TEST_CASE("permutation words, signs, composition") {
  Permutation p = Permutation::from_one_line({2, 0, 3, 1});
  CHECK(p.sign() == -1);
  CHECK(p.cycle_count() == 1);
  Permutation back = Permutation::from_word(4, p.word());
  CHECK(back.oneline == p.oneline);

  // compose applies the right factor first
  Permutation a = Permutation::from_one_line({1, 0, 2});
  Permutation b = Permutation::from_one_line({0, 2, 1});
  Permutation ab = a.compose(b);
  CHECK(ab.oneline == std::vector<int>{1, 2, 0});

  CHECK_THROWS_WITH_AS(Permutation::from_one_line({0, 0, 1}), doctest::Contains("BadWord"),
                       Error);
  CHECK_THROWS_WITH_AS(Permutation::from_word(3, {3}), doctest::Contains("BadWord"), Error);

  // identity has positive sign and n cycles
  Permutation id5 = Permutation::identity(5);
  CHECK(id5.sign() == 1);
  CHECK(id5.cycle_count() == 5);
}

TEST_CASE("permutation action is a strand homomorphism") {
  auto s3 = builtin("S3");
  RepObject x = rep_from_irrep(s3, 2);
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> ol(4);
    for (int i = 0; i < 4; ++i) ol[i] = i;
    for (int i = 3; i > 0; --i) std::swap(ol[i], ol[rng.integer(0, i)]);
    Permutation pa = Permutation::from_one_line(ol);
    for (int i = 3; i > 0; --i) std::swap(ol[i], ol[rng.integer(0, i)]);
    Permutation pb = Permutation::from_one_line(ol);
    Mat lhs = perm_rep(x, 4, SymmetryKind::plain, pa.compose(pb)).mat;
    Mat rhs = perm_rep(x, 4, SymmetryKind::plain, pa).mat *
              perm_rep(x, 4, SymmetryKind::plain, pb).mat;
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
  }
  // the flip on two strands is an involution and a morphism
  Permutation flip = Permutation::from_one_line({1, 0});
  Morphism f = perm_rep(x, 2, SymmetryKind::plain, flip);
  CHECK(is_morphism(f, Tolerance{}));
  CHECK(max_abs_diff(Mat(f.mat * f.mat), ident(4)) == 0.0);
}

TEST_CASE("braid words satisfy the exchange relations") {
  auto q8 = builtin("Q8");
  RepObject x = rep_from_irrep(q8, 4);
  Morphism b1 = braid_word_rep(x, 3, SymmetryKind::plain, {1, 2, 1});
  Morphism b2 = braid_word_rep(x, 3, SymmetryKind::plain, {2, 1, 2});
  CHECK(max_abs_diff(b1.mat, b2.mat) < 1e-14);

  auto z2k = builtin("Z2k");
  RepObject odd = rep_from_irrep(z2k, 1);
  // super flip on two odd lines is the minus swap, so its square is still id
  Morphism sf = perm_rep(odd, 2, SymmetryKind::super, Permutation::from_one_line({1, 0}));
  CHECK(max_abs_diff(sf.mat, Mat(-ident(1))) < 1e-14);
  CHECK_THROWS_WITH_AS(braid_word_rep(x, 3, SymmetryKind::plain, {5}),
                       doctest::Contains("BadWord"), Error);
  CHECK_THROWS_WITH_AS(perm_rep(x, 7, SymmetryKind::plain, Permutation::identity(7)),
                       doctest::Contains("DegreeOverflow"), Error);
}

TEST_CASE("symmetrizers and antisymmetrizers are complementary morphism projections") {
  auto s3 = builtin("S3");
  RepObject x = rep_from_irrep(s3, 2);
  Morphism s = symmetrizer(x, 2, SymmetryKind::plain);
  Morphism a = antisymmetrizer(x, 2, SymmetryKind::plain);
  CHECK(is_projection(s.mat));
  CHECK(is_projection(a.mat));
  CHECK(is_morphism(s, Tolerance{}));
  CHECK(is_morphism(a, Tolerance{}));
  CHECK(max_abs_diff(Mat(s.mat * a.mat), zeros(4, 4)) < 1e-14);
  // on two qubit legs the antisymmetric part is one dimensional
  CHECK(orthonormal_range(a.mat).cols() == 1);
  // three qubit legs admit no antisymmetric part at all
  Morphism a3 = antisymmetrizer(x, 3, SymmetryKind::plain);
  CHECK(max_abs_diff(a3.mat, zeros(8, 8)) < 1e-14);
}

TEST_CASE("antisymmetrizer trace matches the falling factorial") {
  struct Row {
    const char* group;
    int irrep;
    int n;
    double expect;
  };
  // frozen values of d(d-1)...(d-n+1)/n!
  const Row rows[] = {
      {"S3", 2, 2, 1.0},  {"S3", 2, 3, 0.0},  {"S4", 2, 2, 3.0},
      {"S4", 2, 3, 1.0},  {"S4", 2, 4, 0.0},  {"Q8", 4, 2, 1.0},
  };
  for (const Row& r : rows) {
    RepObject x = rep_from_irrep(builtin(r.group), r.irrep);
    auto rep = trace_antisymmetrizer(x, r.n, SymmetryKind::plain);
    CHECK(rep.pass);
    CHECK(std::abs(rep.trace - r.expect) < 1e-9);
    CHECK(std::abs(rep.formula_value - r.expect) < 1e-12);
  }
}

TEST_CASE("dense and counting trace routes agree on the regular object") {
  // d = 6 forces the counting route at n = 4 while n <= 3 stays dense
  RepObject reg = regular_rep(builtin("S3"));
  const double expect[] = {15.0, 20.0, 15.0};
  for (int n = 2; n <= 4; ++n) {
    auto rep = trace_antisymmetrizer(reg, n, SymmetryKind::plain);
    CHECK(rep.pass);
    CHECK(std::abs(rep.trace - expect[n - 2]) < 1e-9);
  }
}

TEST_CASE("trace formula demands a trivial twist in the graded setting") {
  auto z2k = builtin("Z2k");
  RepObject odd = rep_from_irrep(z2k, 1);
  RepObject even = rep_from_irrep(z2k, 0);
  CHECK_THROWS_WITH_AS(trace_antisymmetrizer(odd, 2, SymmetryKind::super),
                       doctest::Contains("OddCategory"), Error);
  auto rep = trace_antisymmetrizer(even, 2, SymmetryKind::super);
  CHECK(rep.pass);
}

TEST_CASE("dimension integrality report") {
  for (const char* name : {"S3", "S4", "D4", "Q8"}) {
    auto cat = builtin(name);
    for (size_t i = 0; i < cat->irreps.size(); ++i) {
      auto rep = verify_dimension_integral(rep_from_irrep(cat, static_cast<int>(i)));
      CHECK(rep.pass);
      CHECK(rep.rounded == cat->irreps[i].dim);
      CHECK(rep.dim_residual < 1e-10);
      for (const auto& t : rep.traces) CHECK(t.trace > -1e-9);
    }
  }
  // a direct sum keeps integral dimension
  auto s3 = builtin("S3");
  RepObject sum = direct_sum(rep_from_irrep(s3, 0), rep_from_irrep(s3, 2)).obj;
  auto rep = verify_dimension_integral(sum);
  CHECK(rep.pass);
  CHECK(rep.rounded == 3);
}

TEST_CASE("determinant of known objects") {
  auto s3 = builtin("S3");
  RepObject std2 = rep_from_irrep(s3, 2);
  // the two dimensional standard object has determinant the sign character
  CHECK(iso1_residual(determinant(std2), rep_from_irrep(s3, 1)) < 1e-12);

  auto q8 = builtin("Q8");
  RepObject spin = rep_from_irrep(q8, 4);
  // the spinor object is determinant free
  CHECK(iso1_residual(determinant(spin), unit_object(q8)) < 1e-12);

  // one dimensional objects are their own determinant
  RepObject sgn = rep_from_irrep(s3, 1);
  CHECK(iso1_residual(determinant(sgn), sgn) < 1e-14);

  // frozen scalar values: det of the S4 standard object is the sign character
  auto s4 = builtin("S4");
  RepObject std3 = rep_from_irrep(s4, 2);
  RepObject d3 = determinant(std3);
  RepObject sgn4 = rep_from_irrep(s4, 1);
  for (int g = 0; g < 24; ++g)
    CHECK(std::abs(d3.at(g)(0, 0) - sgn4.at(g)(0, 0)) < 1e-12);
}

TEST_CASE("determinant respects sums and conjugates") {
  auto s4 = builtin("S4");
  // includes a six dimensional sum, exercising the enumeration route
  std::pair<int, int> pairs[] = {{2, 3}, {2, 4}, {4, 4}, {2, 2}};
  for (auto [i, j] : pairs) {
    auto rep = det_product_check(rep_from_irrep(s4, i), rep_from_irrep(s4, j));
    CHECK(rep.pass);
    CHECK(rep.sum_rule_residual < 1e-9);
    CHECK(rep.conj_rule_residual < 1e-9);
  }
}

TEST_CASE("contraction identity for a determinant free object") {
  auto q8 = builtin("Q8");
  RepObject spin = rep_from_irrep(q8, 4);
  Mat s = det_isometry(spin);
  auto rep = contraction_identity(spin, s);
  CHECK(rep.pass);
  CHECK(std::abs(rep.expected - Complex(-0.5, 0)) < 1e-15);
  CHECK(rep.residual < 1e-12);
  // objects with a nontrivial determinant are rejected
  auto s3 = builtin("S3");
  RepObject std2 = rep_from_irrep(s3, 2);
  Mat s2 = det_isometry(std2);
  CHECK_THROWS_WITH_AS(contraction_identity(std2, s2), doctest::Contains("DetNotTrivial"),
                       Error);
}

TEST_CASE("statistics classification") {
  auto q8 = builtin("Q8");
  auto sc = statistics_classify(rep_from_irrep(q8, 4), SymmetryKind::plain);
  CHECK(sc.dimension == 2);
  CHECK(sc.phase == 1);
  CHECK(sc.kind == StatKind::para_bose);
  CHECK(sc.order == 2);

  auto z2k = builtin("Z2k");
  auto odd = statistics_classify(rep_from_irrep(z2k, 1), SymmetryKind::super);
  CHECK(odd.dimension == 1);
  CHECK(odd.phase == -1);
  CHECK(odd.kind == StatKind::para_fermi);
  CHECK(odd.order == 1);

  auto s3 = builtin("S3");
  RepObject sum = direct_sum(rep_from_irrep(s3, 0), rep_from_irrep(s3, 1)).obj;
  CHECK_THROWS_WITH_AS(statistics_classify(sum, SymmetryKind::plain),
                       doctest::Contains("NotIrreducible"), Error);
}
