#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stc/group.hpp"

#include <algorithm>
#include <set>

using namespace stc;

namespace {

std::vector<std::vector<int>> cyclic_table(int n) {
  std::vector<std::vector<int>> mul(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  return mul;
}

}  // namespace

TEST_CASE("multiplication tables are validated axiom by axiom") {
  auto z3 = validate_group(cyclic_table(3));
  CHECK(z3.order == 3);
  CHECK(z3.identity == 0);
  CHECK(z3.inv[1] == 2);
  CHECK(z3.inv[2] == 1);
  CHECK(z3.op(2, 2) == 1);

  CHECK_THROWS_WITH_AS(validate_group({}), doctest::Contains("BadInput"), Error);
  CHECK_THROWS_WITH_AS(validate_group({{0, 1}, {1}}), doctest::Contains("BadInput"),
                       Error);
  CHECK_THROWS_WITH_AS(validate_group({{0, 3}, {1, 0}}), doctest::Contains("BadInput"),
                       Error);
  // left projection: associative but no two-sided identity
  CHECK_THROWS_WITH_AS(validate_group({{0, 0}, {1, 1}}),
                       doctest::Contains("NoIdentity"), Error);
  // tweaked cyclic table keeps the identity but breaks associativity
  auto bad = cyclic_table(3);
  bad[1][1] = 1;
  CHECK_THROWS_WITH_AS(validate_group(bad), doctest::Contains("NotAssociative"),
                       Error);
  // (max) monoid on {0,1}: 1 is not invertible
  CHECK_THROWS_WITH_AS(validate_group({{0, 1}, {1, 1}}),
                       doctest::Contains("NoInverse"), Error);
  CHECK_THROWS_WITH_AS(validate_group(cyclic_table(2), {"only-one-label"}),
                       doctest::Contains("BadInput"), Error);
}

TEST_CASE("builtin catalogs satisfy the representation-theory bookkeeping") {
  struct Row {
    const char* name;
    int order;
    int n_irreps;
  };
  const Row rows[] = {{"Z2", 2, 2}, {"Z3", 3, 3},  {"Z4", 4, 4}, {"Z2k", 2, 2},
                      {"D4", 8, 5}, {"S3", 6, 3},  {"S4", 24, 5}, {"Q8", 8, 5}};
  for (const auto& row : rows) {
    CAPTURE(row.name);
    auto cat = builtin(row.name);
    CHECK(cat->sg.group.order == row.order);
    CHECK((int)cat->irreps.size() == row.n_irreps);
    CHECK_NOTHROW(validate_catalog(*cat));
    // sum of squared dimensions exhausts the group
    int sq = 0;
    for (const auto& ir : cat->irreps) sq += ir.dim * ir.dim;
    CHECK(sq == row.order);
    // as many irreps as conjugacy classes
    CHECK(conjugacy_classes(cat->sg.group).size() == cat->irreps.size());
  }
  auto names = builtin_names();
  for (const char* n : {"Z2", "S4", "Q8", "Z2k"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  // the cyclic family accepts any small order
  CHECK(builtin("Z12")->sg.group.order == 12);
  CHECK(builtin("Z12")->irreps.size() == 12);
  CHECK_THROWS_WITH_AS(builtin("E8"), doctest::Contains("UnknownFamily"), Error);
  CHECK_THROWS_WITH_AS(builtin("Z0"), doctest::Contains("UnknownFamily"), Error);
  CHECK_THROWS_WITH_AS(builtin("Z9999"), doctest::Contains("UnknownFamily"), Error);
}

TEST_CASE("the distinguished involution of Z2k is central and order two") {
  auto cat = builtin("Z2k");
  REQUIRE(cat->sg.has_k());
  int k = cat->sg.k;
  const auto& g = cat->sg.group;
  CHECK(k != g.identity);
  CHECK(g.op(k, k) == g.identity);
  for (int a = 0; a < g.order; ++a) CHECK(g.op(a, k) == g.op(k, a));
  CHECK_FALSE(builtin("Z2")->sg.has_k());
  // the two irreps are distinguished by their value at k
  CHECK(character(cat->irreps[0])(k).real() == doctest::Approx(1.0));
  CHECK(character(cat->irreps[1])(k).real() == doctest::Approx(-1.0));
}

TEST_CASE("class structure of the nonabelian builtins") {
  auto sizes = [](const FiniteGroup& g) {
    std::multiset<std::size_t> out;
    for (const auto& c : conjugacy_classes(g)) out.insert(c.size());
    return out;
  };
  CHECK(sizes(builtin("S3")->sg.group) == std::multiset<std::size_t>{1, 2, 3});
  CHECK(sizes(builtin("Q8")->sg.group) == std::multiset<std::size_t>{1, 1, 2, 2, 2});
  CHECK(sizes(builtin("D4")->sg.group) == std::multiset<std::size_t>{1, 1, 2, 2, 2});
  CHECK(sizes(builtin("S4")->sg.group) == std::multiset<std::size_t>{1, 3, 6, 6, 8});

  CHECK(center(builtin("S3")->sg.group) == std::vector<int>{0});
  CHECK(center(builtin("Q8")->sg.group).size() == 2);
  CHECK(center(builtin("D4")->sg.group).size() == 2);
  CHECK(center(builtin("Z4")->sg.group).size() == 4);
  // classes partition the group
  auto cls = conjugacy_classes(builtin("S4")->sg.group);
  std::set<int> seen;
  for (const auto& c : cls) seen.insert(c.begin(), c.end());
  CHECK(seen.size() == 24);
}

TEST_CASE("characters are orthonormal class functions") {
  for (const char* name : {"S3", "S4", "Q8", "D4"}) {
    CAPTURE(name);
    auto cat = builtin(name);
    const auto& g = cat->sg.group;
    std::vector<Vec> chi;
    for (const auto& ir : cat->irreps) chi.push_back(character(ir));
    for (std::size_t i = 0; i < chi.size(); ++i) {
      CHECK(chi[i](g.identity).real() == doctest::Approx((double)cat->irreps[i].dim));
      for (std::size_t j = 0; j < chi.size(); ++j) {
        Complex s = 0;
        for (int a = 0; a < g.order; ++a) s += std::conj(chi[i](a)) * chi[j](a);
        s /= (double)g.order;
        CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
      // constant on conjugacy classes
      for (const auto& c : conjugacy_classes(g))
        for (int a : c) CHECK(std::abs(chi[i](a) - chi[i](c[0])) < 1e-10);
    }
  }
}

TEST_CASE("haar averaging projects onto invariants") {
  auto cat = builtin("S3");
  const auto& g = cat->sg.group;
  // a nontrivial irrep averages to zero
  Mat avg = haar_average(g, cat->irreps[2].matrices);
  CHECK(avg.cwiseAbs().maxCoeff() < 1e-12);
  // averaged conjugation is idempotent and commutes with the action
  const auto& pi = cat->irreps[2].matrices;
  Rng rng(3);
  Mat x = rng.matrix(2, 2);
  Mat px = haar_average(g, [&](int a) { return Mat(pi[a] * x * pi[a].adjoint()); });
  Mat ppx = haar_average(g, [&](int a) { return Mat(pi[a] * px * pi[a].adjoint()); });
  CHECK(max_abs_diff(px, ppx) < 1e-12);
  for (int a = 0; a < g.order; ++a)
    CHECK(max_abs_diff(Mat(pi[a] * px), Mat(px * pi[a])) < 1e-12);

  CHECK_THROWS_WITH_AS(haar_average(g, {ident(2), ident(3)}),
                       doctest::Contains("ShapeMismatch"), Error);
  CHECK_THROWS_WITH_AS(haar_average(g, std::vector<Mat>{ident(2)}),
                       doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("irrep validation catches broken data") {
  auto cat = builtin("S3");
  const auto& g = cat->sg.group;
  CHECK_NOTHROW(validate_irrep(g, cat->irreps[2]));
  Irrep wrong_count = cat->irreps[2];
  wrong_count.matrices.pop_back();
  CHECK_THROWS_WITH_AS(validate_irrep(g, wrong_count), doctest::Contains("BadInput"),
                       Error);
  Irrep not_unitary = cat->irreps[2];
  not_unitary.matrices[1] *= 2.0;
  CHECK_THROWS_WITH_AS(validate_irrep(g, not_unitary), doctest::Contains("BadInput"),
                       Error);
  Irrep not_hom = cat->irreps[2];
  std::swap(not_hom.matrices[1], not_hom.matrices[2]);
  CHECK_THROWS_WITH_AS(validate_irrep(g, not_hom), doctest::Contains("BadInput"),
                       Error);
  // reducible: a direct sum of two trivial copies
  Irrep red{2, {}, "red"};
  for (int a = 0; a < g.order; ++a) red.matrices.push_back(ident(2));
  CHECK_THROWS_WITH_AS(validate_irrep(g, red), doctest::Contains("BadInput"), Error);
}

TEST_CASE("catalogs survive a json round trip") {
  for (const char* name : {"Q8", "Z2k", "S3"}) {
    CAPTURE(name);
    auto cat = builtin(name);
    auto back = catalog_from_json(catalog_to_json(*cat));
    CHECK(back->sg.group.order == cat->sg.group.order);
    CHECK(back->sg.k == cat->sg.k);
    CHECK(back->sg.group.mul == cat->sg.group.mul);
    REQUIRE(back->irreps.size() == cat->irreps.size());
    for (std::size_t i = 0; i < cat->irreps.size(); ++i) {
      CHECK(back->irreps[i].dim == cat->irreps[i].dim);
      for (int a = 0; a < cat->sg.group.order; ++a)
        CHECK(max_abs_diff(back->irreps[i].matrices[a], cat->irreps[i].matrices[a]) <
              1e-12);
    }
    CHECK_NOTHROW(validate_catalog(*back));
  }
  // a bare group descriptor parses without irreps
  auto bare = catalog_from_json(R"({"order": 2, "mul": [[0, 1], [1, 0]]})");
  CHECK(bare->sg.group.order == 2);
  CHECK(bare->irreps.empty());
  CHECK_FALSE(bare->sg.has_k());

  CHECK_THROWS_WITH_AS(catalog_from_json("{nonsense"), doctest::Contains("BadInput"),
                       Error);
  CHECK_THROWS_WITH_AS(catalog_from_json(R"({"order": 3, "mul": [[0, 1], [1, 0]]})"),
                       doctest::Contains("BadInput"), Error);
  CHECK_THROWS_WITH_AS(catalog_from_json(R"({"order": 2, "mul": [[0, 1], [1, 0]], "k": 5})"),
                       doctest::Contains("BadInput"), Error);
}
