#include "stc/group.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace stc {

FiniteGroup validate_group(const std::vector<std::vector<int>>& mul,
                           std::vector<std::string> labels) {
  const int n = static_cast<int>(mul.size());
  if (n == 0) fail("BadInput", "empty multiplication table");
  for (const auto& row : mul) {
    if (static_cast<int>(row.size()) != n) fail("BadInput", "table is not square");
    for (int v : row)
      if (v < 0 || v >= n) fail("BadInput", "table entry out of range");
  }

  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = mul[e][x] == x && mul[x][e] == x;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) fail("NoIdentity", "no two-sided identity element");

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
          fail("NotAssociative", "associativity fails at (" + std::to_string(a) + "," +
                                     std::to_string(b) + "," + std::to_string(c) + ")");

  std::vector<int> inv(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (mul[a][b] == identity && mul[b][a] == identity) {
        inv[a] = b;
        break;
      }
    if (inv[a] < 0) fail("NoInverse", "element " + std::to_string(a) + " has no inverse");
  }

  FiniteGroup g;
  g.order = n;
  g.mul = mul;
  g.identity = identity;
  g.inv = std::move(inv);
  if (labels.empty()) {
    for (int i = 0; i < n; ++i) g.labels.push_back("g" + std::to_string(i));
  } else {
    if (static_cast<int>(labels.size()) != n) fail("BadInput", "label count mismatch");
    g.labels = std::move(labels);
  }
  return g;
}

Mat haar_average(const FiniteGroup& g, const std::function<Mat(int)>& f) {
  Mat acc = f(0);
  for (int x = 1; x < g.order; ++x) {
    Mat term = f(x);
    if (term.rows() != acc.rows() || term.cols() != acc.cols())
      fail("ShapeMismatch", "haar_average family has inconsistent shapes");
    acc += term;
  }
  return acc / static_cast<double>(g.order);
}

Mat haar_average(const FiniteGroup& g, const std::vector<Mat>& f) {
  if (static_cast<int>(f.size()) != g.order)
    fail("ShapeMismatch", "haar_average family size differs from group order");
  return haar_average(g, [&](int x) { return f[x]; });
}

std::vector<int> center(const FiniteGroup& g) {
  std::vector<int> out;
  for (int z = 0; z < g.order; ++z) {
    bool central = true;
    for (int x = 0; x < g.order && central; ++x) central = g.op(z, x) == g.op(x, z);
    if (central) out.push_back(z);
  }
  return out;
}

std::vector<std::vector<int>> conjugacy_classes(const FiniteGroup& g) {
  std::vector<std::vector<int>> classes;
  std::vector<bool> seen(g.order, false);
  for (int a = 0; a < g.order; ++a) {
    if (seen[a]) continue;
    std::set<int> cls;
    for (int x = 0; x < g.order; ++x) cls.insert(g.op(g.op(x, a), g.inv[x]));
    std::vector<int> v(cls.begin(), cls.end());
    for (int e : v) seen[e] = true;
    classes.push_back(std::move(v));
  }
  return classes;
}

Vec character(const Irrep& ir) {
  Vec chi(static_cast<Eigen::Index>(ir.matrices.size()));
  for (size_t i = 0; i < ir.matrices.size(); ++i) chi(static_cast<Eigen::Index>(i)) = ir.matrices[i].trace();
  return chi;
}

void validate_irrep(const FiniteGroup& g, const Irrep& ir, const Tolerance& tol) {
  if (static_cast<int>(ir.matrices.size()) != g.order)
    fail("BadInput", "irrep " + ir.name + " has wrong number of matrices");
  for (const Mat& m : ir.matrices) {
    if (m.rows() != ir.dim || m.cols() != ir.dim)
      fail("BadInput", "irrep " + ir.name + " has wrong matrix shape");
    if (!is_unitary(m, tol)) fail("BadInput", "irrep " + ir.name + " has a non-unitary matrix");
  }
  if (!approx_equal(ir.matrices[g.identity], ident(ir.dim), tol))
    fail("BadInput", "irrep " + ir.name + " does not send identity to identity");
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      if (!approx_equal(Mat(ir.matrices[a] * ir.matrices[b]), ir.matrices[g.op(a, b)], tol))
        fail("BadInput", "irrep " + ir.name + " is not a homomorphism");
  Vec chi = character(ir);
  double norm2 = 0;
  for (int x = 0; x < g.order; ++x) norm2 += std::norm(chi(x));
  if (std::abs(norm2 / g.order - 1.0) > 1e-6)
    fail("BadInput", "representation " + ir.name + " is not irreducible");
}

void validate_catalog(const Catalog& cat, const Tolerance& tol) {
  const FiniteGroup& g = cat.sg.group;
  long sumsq = 0;
  for (const Irrep& ir : cat.irreps) {
    validate_irrep(g, ir, tol);
    sumsq += static_cast<long>(ir.dim) * ir.dim;
  }
  if (sumsq != g.order)
    fail("BadInput", "catalog " + cat.name + " irrep dimensions do not exhaust the group order");
  for (size_t i = 0; i < cat.irreps.size(); ++i)
    for (size_t j = 0; j < cat.irreps.size(); ++j) {
      Vec ci = character(cat.irreps[i]), cj = character(cat.irreps[j]);
      Complex ip = 0;
      for (int x = 0; x < g.order; ++x) ip += std::conj(ci(x)) * cj(x);
      ip /= static_cast<double>(g.order);
      Complex want = i == j ? Complex(1, 0) : Complex(0, 0);
      if (std::abs(ip - want) > 1e-8)
        fail("BadInput", "catalog " + cat.name + " character orthogonality fails");
    }
  if (cat.sg.has_k()) {
    int k = cat.sg.k;
    if (k < 0 || k >= g.order) fail("BadInput", "k out of range");
    if (g.op(k, k) != g.identity) fail("NoCentralInvolution", "k is not an involution");
    auto z = center(g);
    if (std::find(z.begin(), z.end(), k) == z.end())
      fail("NoCentralInvolution", "k is not central");
  }
}

CatalogPtr catalog_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail("BadInput", std::string("invalid JSON: ") + e.what());
  }
  auto cat = std::make_shared<Catalog>();
  try {
    std::vector<std::vector<int>> mul = j.at("mul").get<std::vector<std::vector<int>>>();
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
    cat->sg.group = validate_group(mul, labels);
    if (j.contains("order") && j["order"].get<int>() != cat->sg.group.order)
      fail("BadInput", "declared order disagrees with table size");
    cat->sg.k = j.value("k", -1);
    if (cat->sg.k >= 0) {
      const FiniteGroup& g = cat->sg.group;
      if (cat->sg.k >= g.order) fail("BadInput", "k out of range");
      if (g.op(cat->sg.k, cat->sg.k) != g.identity)
        fail("NoCentralInvolution", "k is not an involution");
      for (int a = 0; a < g.order; ++a)
        if (g.op(a, cat->sg.k) != g.op(cat->sg.k, a))
          fail("NoCentralInvolution", "k is not central");
    }
    cat->name = j.value("name", "custom");
    if (j.contains("irreps")) {
      for (const auto& ji : j["irreps"]) {
        Irrep ir;
        ir.dim = ji.at("dim").get<int>();
        ir.name = ji.value("name", "irrep" + std::to_string(cat->irreps.size()));
        for (const auto& jm : ji.at("matrices")) {
          Mat m(ir.dim, ir.dim);
          int r = 0;
          for (const auto& row : jm) {
            int c = 0;
            for (const auto& ent : row) {
              m(r, c) = Complex(ent.at(0).get<double>(), ent.at(1).get<double>());
              ++c;
            }
            ++r;
          }
          ir.matrices.push_back(std::move(m));
        }
        cat->irreps.push_back(std::move(ir));
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail("BadInput", std::string("malformed group descriptor: ") + e.what());
  }
  if (!cat->irreps.empty()) validate_catalog(*cat);
  return cat;
}

std::string catalog_to_json(const Catalog& cat) {
  nlohmann::json j;
  j["name"] = cat.name;
  j["order"] = cat.sg.group.order;
  j["mul"] = cat.sg.group.mul;
  j["labels"] = cat.sg.group.labels;
  if (cat.sg.has_k()) j["k"] = cat.sg.k;
  j["irreps"] = nlohmann::json::array();
  for (const Irrep& ir : cat.irreps) {
    nlohmann::json ji;
    ji["dim"] = ir.dim;
    ji["name"] = ir.name;
    ji["matrices"] = nlohmann::json::array();
    for (const Mat& m : ir.matrices) {
      nlohmann::json jm = nlohmann::json::array();
      for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c)
          row.push_back({m(r, c).real(), m(r, c).imag()});
        jm.push_back(row);
      }
      ji["matrices"].push_back(jm);
    }
    j["irreps"].push_back(ji);
  }
  return j.dump(2);
}

}  // namespace stc
