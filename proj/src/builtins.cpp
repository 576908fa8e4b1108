#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "stc/group.hpp"

namespace stc {

namespace {

// ---- symmetric groups via Young's orthogonal form ----

using OneLine = std::vector<int>;  // p[i] = image of i, 0-based

std::vector<OneLine> all_perms(int n) {
  OneLine p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<OneLine> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int perm_index(const std::vector<OneLine>& perms, const OneLine& p) {
  auto it = std::lower_bound(perms.begin(), perms.end(), p);
  return static_cast<int>(it - perms.begin());
}

// Standard Young tableau as row-major filling of a partition shape.
struct Tableau {
  std::vector<std::vector<int>> rows;  // entries 1..n

  bool standard() const {
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < rows[r].size(); ++c) {
        if (c + 1 < rows[r].size() && rows[r][c] > rows[r][c + 1]) return false;
        if (r + 1 < rows.size() && c < rows[r + 1].size() && rows[r][c] > rows[r + 1][c])
          return false;
      }
    return true;
  }

  // (row, col) of a given entry
  std::pair<int, int> find(int v) const {
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < rows[r].size(); ++c)
        if (rows[r][c] == v) return {static_cast<int>(r), static_cast<int>(c)};
    return {-1, -1};
  }

  bool operator<(const Tableau& o) const { return rows < o.rows; }
  bool operator==(const Tableau& o) const { return rows == o.rows; }
};

std::vector<Tableau> standard_tableaux(const std::vector<int>& shape) {
  int n = 0;
  for (int r : shape) n += r;
  OneLine fill(n);
  for (int i = 0; i < n; ++i) fill[i] = i + 1;
  std::vector<Tableau> out;
  do {
    Tableau t;
    int pos = 0;
    for (int r : shape) {
      t.rows.emplace_back(fill.begin() + pos, fill.begin() + pos + r);
      pos += r;
    }
    if (t.standard()) out.push_back(std::move(t));
  } while (std::next_permutation(fill.begin(), fill.end()));
  std::sort(out.begin(), out.end());
  return out;
}

// Matrix of the adjacent transposition (i, i+1), 1-based i, in the seminormal
// orthogonal basis indexed by standard tableaux.
Mat yor_generator(const std::vector<Tableau>& tabs, int i) {
  const int m = static_cast<int>(tabs.size());
  Mat out = zeros(m, m);
  for (int t = 0; t < m; ++t) {
    auto [r1, c1] = tabs[t].find(i);
    auto [r2, c2] = tabs[t].find(i + 1);
    double axial = (c2 - r2) - (c1 - r1);
    out(t, t) = 1.0 / axial;
    Tableau swapped = tabs[t];
    swapped.rows[r1][c1] = i + 1;
    swapped.rows[r2][c2] = i;
    if (swapped.standard()) {
      int t2 = static_cast<int>(std::lower_bound(tabs.begin(), tabs.end(), swapped) - tabs.begin());
      out(t2, t) = std::sqrt(1.0 - 1.0 / (axial * axial));
    }
  }
  return out;
}

// Bubble-sort word: returns adjacent-swap positions (0-based) such that
// p composed with those position swaps, in emission order, is the identity.
std::vector<int> bubble_word(OneLine p) {
  std::vector<int> word;
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t j = 0; j + 1 < p.size(); ++j)
      if (p[j] > p[j + 1]) {
        std::swap(p[j], p[j + 1]);
        word.push_back(static_cast<int>(j));
        moved = true;
      }
  }
  return word;
}

Irrep yor_irrep(const std::vector<OneLine>& perms, const std::vector<int>& shape,
                const std::string& name) {
  const int n = static_cast<int>(perms[0].size());
  auto tabs = standard_tableaux(shape);
  std::vector<Mat> gens;  // gens[i] = matrix of (i+1, i+2)
  for (int i = 1; i < n; ++i) gens.push_back(yor_generator(tabs, i));

  Irrep ir;
  ir.dim = static_cast<int>(tabs.size());
  ir.name = name;
  for (const OneLine& p : perms) {
    // p = s_{w_m} ... s_{w_1} for the bubble word w, so multiply left to right.
    Mat m = ident(ir.dim);
    for (int pos : bubble_word(p)) m = gens[pos] * m;
    ir.matrices.push_back(std::move(m));
  }
  return ir;
}

CatalogPtr make_symmetric(int n, const std::string& name) {
  auto perms = all_perms(n);
  std::vector<std::vector<int>> mul(perms.size(), std::vector<int>(perms.size()));
  std::vector<std::string> labels;
  for (size_t a = 0; a < perms.size(); ++a) {
    std::string lab;
    for (int v : perms[a]) lab += std::to_string(v);
    labels.push_back(lab);
    for (size_t b = 0; b < perms.size(); ++b) {
      OneLine comp(n);
      for (int i = 0; i < n; ++i) comp[i] = perms[a][perms[b][i]];
      mul[a][b] = perm_index(perms, comp);
    }
  }

  auto cat = std::make_shared<Catalog>();
  cat->name = name;
  cat->sg.group = validate_group(mul, labels);
  if (n == 3) {
    cat->irreps.push_back(yor_irrep(perms, {3}, "trivial"));
    cat->irreps.push_back(yor_irrep(perms, {1, 1, 1}, "sign"));
    cat->irreps.push_back(yor_irrep(perms, {2, 1}, "standard"));
  } else if (n == 4) {
    cat->irreps.push_back(yor_irrep(perms, {4}, "trivial"));
    cat->irreps.push_back(yor_irrep(perms, {1, 1, 1, 1}, "sign"));
    cat->irreps.push_back(yor_irrep(perms, {3, 1}, "standard"));
    cat->irreps.push_back(yor_irrep(perms, {2, 1, 1}, "standard_sign"));
    cat->irreps.push_back(yor_irrep(perms, {2, 2}, "twodim"));
  } else {
    fail("UnknownFamily", "symmetric group catalog only built for n=3,4");
  }
  validate_catalog(*cat);
  return cat;
}

// ---- cyclic groups ----

CatalogPtr make_cyclic(int n, bool super) {
  std::vector<std::vector<int>> mul(n, std::vector<int>(n));
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    labels.push_back("r" + std::to_string(a));
    for (int b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  }
  auto cat = std::make_shared<Catalog>();
  cat->name = super ? "Z2k" : "Z" + std::to_string(n);
  cat->sg.group = validate_group(mul, labels);
  if (super) cat->sg.k = 1;
  for (int j = 0; j < n; ++j) {
    Irrep ir;
    ir.dim = 1;
    ir.name = super ? (j == 0 ? "even" : "odd") : "chi" + std::to_string(j);
    for (int a = 0; a < n; ++a) {
      double ang = 2.0 * std::numbers::pi * j * a / n;
      ir.matrices.push_back(scalar_mat(Complex(std::cos(ang), std::sin(ang))));
    }
    cat->irreps.push_back(std::move(ir));
  }
  validate_catalog(*cat);
  return cat;
}

// ---- dihedral D4 ----

CatalogPtr make_d4() {
  auto idx = [](int a, int b) { return a + 4 * b; };
  std::vector<std::vector<int>> mul(8, std::vector<int>(8));
  std::vector<std::string> labels(8);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b) {
      labels[idx(a, b)] = std::string(b ? "s" : "") + (b ? "r" : "r") + std::to_string(a);
      labels[idx(a, b)] = (b ? "r" + std::to_string(a) + "s" : "r" + std::to_string(a));
      for (int a2 = 0; a2 < 4; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) {
          int aa = ((a + (b ? 4 - a2 : a2)) % 4 + 4) % 4;
          mul[idx(a, b)][idx(a2, b2)] = idx(aa, (b + b2) % 2);
        }
    }
  auto cat = std::make_shared<Catalog>();
  cat->name = "D4";
  cat->sg.group = validate_group(mul, labels);

  auto onedim = [&](Complex rho, Complex sig, const std::string& name) {
    Irrep ir;
    ir.dim = 1;
    ir.name = name;
    ir.matrices.resize(8);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 2; ++b)
        ir.matrices[idx(a, b)] = scalar_mat(std::pow(rho, a) * (b ? sig : Complex(1, 0)));
    return ir;
  };
  cat->irreps.push_back(onedim(1, 1, "trivial"));
  cat->irreps.push_back(onedim(1, -1, "det"));
  cat->irreps.push_back(onedim(-1, 1, "rot_sign"));
  cat->irreps.push_back(onedim(-1, -1, "mixed_sign"));

  Irrep two;
  two.dim = 2;
  two.name = "standard";
  Mat rot(2, 2), refl(2, 2);
  rot << 0, -1, 1, 0;
  refl << 1, 0, 0, -1;
  two.matrices.resize(8);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b) {
      Mat m = ident(2);
      for (int t = 0; t < a; ++t) m = rot * m;
      if (b) m = m * refl;
      two.matrices[idx(a, b)] = m;
    }
  cat->irreps.push_back(std::move(two));
  validate_catalog(*cat);
  return cat;
}

// ---- quaternion group Q8 ----

CatalogPtr make_q8() {
  // element = axis*2 + (negative ? 1 : 0), axes 1,i,j,k
  auto idx = [](int axis, int neg) { return axis * 2 + neg; };
  // axis multiplication: result axis and sign
  const int ax_table[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int sg_table[4][4] = {{+1, +1, +1, +1},
                              {+1, -1, +1, -1},
                              {+1, -1, -1, +1},
                              {+1, +1, -1, -1}};
  // sg_table[a][b]: sign of (unit_a * unit_b); rows/cols ordered 1,i,j,k.
  // i*j=+k, j*i=-k, j*k=+i, k*j=-i, k*i=+j, i*k=-j, squares of i,j,k = -1.
  std::vector<std::vector<int>> mul(8, std::vector<int>(8));
  const char* axname[4] = {"1", "i", "j", "k"};
  std::vector<std::string> labels(8);
  for (int a = 0; a < 4; ++a)
    for (int na = 0; na < 2; ++na) {
      labels[idx(a, na)] = std::string(na ? "-" : "") + axname[a];
      for (int b = 0; b < 4; ++b)
        for (int nb = 0; nb < 2; ++nb) {
          int axis = ax_table[a][b];
          int sign = sg_table[a][b];
          if (na) sign = -sign;
          if (nb) sign = -sign;
          mul[idx(a, na)][idx(b, nb)] = idx(axis, sign < 0);
        }
    }
  auto cat = std::make_shared<Catalog>();
  cat->name = "Q8";
  cat->sg.group = validate_group(mul, labels);

  auto onedim = [&](double vi, double vj, const std::string& name) {
    Irrep ir;
    ir.dim = 1;
    ir.name = name;
    ir.matrices.resize(8);
    double vals[4] = {1, vi, vj, vi * vj};
    for (int a = 0; a < 4; ++a)
      for (int n = 0; n < 2; ++n) ir.matrices[idx(a, n)] = scalar_mat(vals[a]);
    return ir;
  };
  cat->irreps.push_back(onedim(1, 1, "trivial"));
  cat->irreps.push_back(onedim(1, -1, "chi_i"));
  cat->irreps.push_back(onedim(-1, 1, "chi_j"));
  cat->irreps.push_back(onedim(-1, -1, "chi_k"));

  Irrep two;
  two.dim = 2;
  two.name = "spinor";
  Mat mi(2, 2), mj(2, 2);
  const Complex I(0, 1);
  mi << I, 0, 0, -I;
  mj << 0, -1, 1, 0;
  Mat mk = mi * mj;
  Mat units[4] = {ident(2), mi, mj, mk};
  two.matrices.resize(8);
  for (int a = 0; a < 4; ++a)
    for (int n = 0; n < 2; ++n) two.matrices[idx(a, n)] = (n ? -1.0 : 1.0) * units[a];
  cat->irreps.push_back(std::move(two));
  validate_catalog(*cat);
  return cat;
}

}  // namespace

CatalogPtr builtin(const std::string& name) {
  static std::map<std::string, CatalogPtr> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;

  CatalogPtr cat;
  if (name == "Z2k")
    cat = make_cyclic(2, true);
  else if (name == "S3")
    cat = make_symmetric(3, "S3");
  else if (name == "S4")
    cat = make_symmetric(4, "S4");
  else if (name == "D4")
    cat = make_d4();
  else if (name == "Q8")
    cat = make_q8();
  else if (name.size() >= 2 && name[0] == 'Z') {
    int n = 0;
    for (size_t i = 1; i < name.size(); ++i) {
      if (!isdigit(name[i])) fail("UnknownFamily", "no builtin group named " + name);
      n = n * 10 + (name[i] - '0');
    }
    if (n < 1 || n > 64) fail("UnknownFamily", "cyclic order out of supported range: " + name);
    cat = make_cyclic(n, false);
  } else {
    fail("UnknownFamily", "no builtin group named " + name);
  }
  cache[name] = cat;
  return cat;
}

std::vector<std::string> builtin_names() {
  return {"Z2", "Z3", "Z4", "S3", "S4", "D4", "Q8", "Z2k"};
}

}  // namespace stc
