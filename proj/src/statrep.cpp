#include "stc/statrep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stc {

namespace {

constexpr int kMaxStrands = 6;        // direct n! enumeration limit
constexpr long kMaxMatrixDim = 260;   // dense accumulation limit for d^n

long ipow(int d, int n) {
  long r = 1;
  for (int i = 0; i < n; ++i) r *= d;
  return r;
}

}  // namespace

Permutation Permutation::identity(int n) {
  Permutation p;
  p.n = n;
  p.oneline.resize(n);
  for (int i = 0; i < n; ++i) p.oneline[i] = i;
  return p;
}

Permutation Permutation::from_one_line(std::vector<int> ol) {
  const int n = static_cast<int>(ol.size());
  std::vector<bool> seen(n, false);
  for (int v : ol) {
    if (v < 0 || v >= n || seen[v]) fail("BadWord", "one-line array is not a bijection");
    seen[v] = true;
  }
  Permutation p;
  p.n = n;
  p.oneline = std::move(ol);
  return p;
}

Permutation Permutation::from_word(int n, const std::vector<int>& word) {
  Permutation p = identity(n);
  for (int letter : word) {
    if (letter < 1 || letter > n - 1) fail("BadWord", "letter out of range 1..n-1");
    Permutation s = identity(n);
    std::swap(s.oneline[letter - 1], s.oneline[letter]);
    p = p.compose(s);
  }
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  if (n != other.n) fail("BadWord", "strand count mismatch");
  Permutation out;
  out.n = n;
  out.oneline.resize(n);
  for (int i = 0; i < n; ++i) out.oneline[i] = oneline[other.oneline[i]];
  return out;
}

std::vector<int> Permutation::word() const {
  // Bubble-sort by position swaps; reversed emission order rebuilds this
  // permutation as a left-to-right product of adjacent transpositions.
  std::vector<int> emitted;
  std::vector<int> p = oneline;
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t j = 0; j + 1 < p.size(); ++j)
      if (p[j] > p[j + 1]) {
        std::swap(p[j], p[j + 1]);
        emitted.push_back(static_cast<int>(j) + 1);
        moved = true;
      }
  }
  std::reverse(emitted.begin(), emitted.end());
  return emitted;
}

int Permutation::cycle_count() const {
  std::vector<bool> seen(n, false);
  int cycles = 0;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++cycles;
    int j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = oneline[j];
    }
  }
  return cycles;
}

int Permutation::sign() const { return (n - cycle_count()) % 2 == 0 ? 1 : -1; }

namespace {

RepObject tensor_power(const RepObject& x, int n) {
  RepObject acc = unit_object(x.cat);
  for (int i = 0; i < n; ++i) acc = tensor_obj(acc, x);
  return acc;
}

Mat braiding_gate(const RepObject& x, SymmetryKind kind) {
  return symmetry(x, x, kind).mat;
}

// Steinhaus-Johnson-Trotter walk: calls on_swap(pos) for each adjacent
// position swap; consecutive permutations differ by exactly that swap.
template <typename F>
void sjt_walk(int n, F&& on_swap) {
  std::vector<int> p(n), pos(n), dir(n, -1);
  for (int i = 0; i < n; ++i) p[i] = pos[i] = i;
  while (true) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      int j = pos[v] + dir[v];
      if (j < 0 || j >= n) continue;
      if (p[j] < v && v > best) best = v;
    }
    if (best < 0) return;
    int i = pos[best], j = i + dir[best];
    std::swap(p[i], p[j]);
    pos[p[i]] = i;
    pos[p[j]] = j;
    for (int v = best + 1; v < n; ++v) dir[v] = -dir[v];
    on_swap(std::min(i, j));
  }
}

struct ProjectorPair {
  Mat sym;
  Mat anti;
};

ProjectorPair projector_mats(const RepObject& x, int n, SymmetryKind kind) {
  const int d = x.dim;
  const long N = ipow(d, n);
  Mat m = ident(N), acc_s = m, acc_a = m;
  if (n >= 2) {
    Mat c = braiding_gate(x, kind);
    int sign = 1;
    sjt_walk(n, [&](int pos) {
      m = apply_two_leg_gate_right(c, m, d, n, pos);
      sign = -sign;
      acc_s += m;
      acc_a += static_cast<double>(sign) * m;
    });
  }
  double fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  return ProjectorPair{acc_s / fact, acc_a / fact};
}

void check_strand_limits(const RepObject& x, int n, bool dense) {
  if (n < 0) fail("BadWord", "negative strand count");
  if (n > kMaxStrands)
    fail("DegreeOverflow", "direct enumeration limited to " + std::to_string(kMaxStrands) +
                               " strands");
  if (dense && ipow(x.dim, n) > kMaxMatrixDim * 16)
    fail("DegreeOverflow", "tensor power too large for dense projectors");
}

}  // namespace

Morphism perm_rep(const RepObject& x, int n, SymmetryKind kind, const Permutation& sigma) {
  if (sigma.n != n) fail("BadWord", "permutation strand count mismatch");
  check_strand_limits(x, n, true);
  const int d = x.dim;
  const long N = ipow(d, n);
  Mat m = ident(N);
  if (n >= 2) {
    Mat c = braiding_gate(x, kind);
    for (int letter : sigma.word()) m = apply_two_leg_gate_right(c, m, d, n, letter - 1);
  }
  RepObject xn = tensor_power(x, n);
  return Morphism{xn, xn, std::move(m)};
}

Morphism braid_word_rep(const RepObject& x, int n, SymmetryKind kind,
                        const std::vector<int>& word) {
  check_strand_limits(x, n, true);
  const int d = x.dim;
  Mat m = ident(ipow(d, n));
  if (n >= 2) {
    Mat c = braiding_gate(x, kind);
    for (int letter : word) {
      int a = std::abs(letter);
      if (a < 1 || a > n - 1) fail("BadWord", "braid letter out of range");
      m = apply_two_leg_gate_right(c, m, d, n, a - 1);
    }
  } else if (!word.empty()) {
    fail("BadWord", "braid letter out of range");
  }
  RepObject xn = tensor_power(x, n);
  return Morphism{xn, xn, std::move(m)};
}

Morphism symmetrizer(const RepObject& x, int n, SymmetryKind kind) {
  check_strand_limits(x, n, true);
  RepObject xn = tensor_power(x, n);
  return Morphism{xn, xn, projector_mats(x, n, kind).sym};
}

Morphism antisymmetrizer(const RepObject& x, int n, SymmetryKind kind) {
  check_strand_limits(x, n, true);
  RepObject xn = tensor_power(x, n);
  return Morphism{xn, xn, projector_mats(x, n, kind).anti};
}

namespace {

// Number of multi-indices in [d]^n fixed by the strand permutation, found by
// direct enumeration.
long fixed_multi_indices(int d, const Permutation& sigma) {
  const int n = sigma.n;
  const long N = ipow(d, n);
  long count = 0;
  std::vector<int> idx(n, 0);
  for (long flat = 0; flat < N; ++flat) {
    bool fixed = true;
    for (int t = 0; t < n && fixed; ++t) fixed = idx[t] == idx[sigma.oneline[t]];
    if (fixed) ++count;
    for (int t = n - 1; t >= 0; --t) {
      if (++idx[t] < d) break;
      idx[t] = 0;
    }
  }
  return count;
}

}  // namespace

TraceReport trace_antisymmetrizer(const RepObject& x, int n, SymmetryKind kind,
                                  const Tolerance& tol) {
  if (x.dim == 0) fail("ZeroObject", "trace formula needs a nonzero object");
  if (n < 0 || n > kMaxStrands)
    fail("DegreeOverflow", "direct enumeration limited to " + std::to_string(kMaxStrands) +
                               " strands");
  if (kind == SymmetryKind::super) {
    Morphism th = twist(x, SymmetryKind::super, tol);
    if (max_abs_diff(th.mat, ident(x.dim)) > 1e-7)
      fail("OddCategory", "trace formula requires a trivial twist");
  }
  const double d_real = dimension(x);
  const int d = x.dim;
  double tr;
  if (n <= 1) {
    tr = n == 0 ? 1.0 : d_real;
  } else if (ipow(d, n) <= kMaxMatrixDim) {
    // Dense route: categorical trace against the standard conjugate of the
    // tensor power. Its pairing Gram factorizes leg by leg, so contract the
    // accumulated projector with the Kronecker power of the base Gram.
    Mat a = projector_mats(x, n, SymmetryKind::plain).anti;
    ConjugateSolution c1 = conjugate(x, tol);
    Mat rm(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) rm(i, j) = c1.r.mat(static_cast<Eigen::Index>(i) * d + j, 0);
    Mat m1 = rm.adjoint() * rm;
    Mat mn = ident(1);
    for (int t = 0; t < n; ++t) mn = kron(mn, m1);
    Complex val = (a.cwiseProduct(mn)).sum();
    tr = val.real();
  } else {
    // Large tensor power: sum sgn(sigma) times the fixed-point count of the
    // strand permutation over all of P_n.
    Permutation p = Permutation::identity(n);
    std::vector<int> ol = p.oneline;
    double acc = 0;
    do {
      Permutation s = Permutation::from_one_line(ol);
      acc += s.sign() * static_cast<double>(fixed_multi_indices(d, s));
    } while (std::next_permutation(ol.begin(), ol.end()));
    double fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    tr = acc / fact;
  }

  double formula = 1;
  for (int t = 0; t < n; ++t) formula *= (d_real - t);
  for (int i = 2; i <= n; ++i) formula /= i;

  TraceReport rep;
  rep.n = n;
  rep.trace = tr;
  rep.formula_value = formula;
  rep.residual = std::abs(tr - formula);
  rep.pass = rep.residual <= 10 * tol.abs_eps;
  return rep;
}

IntegralityReport verify_dimension_integral(const RepObject& x, const Tolerance& tol) {
  if (x.dim == 0) fail("ZeroObject", "integrality check needs a nonzero object");
  IntegralityReport rep;
  rep.dim = dimension(x);
  rep.rounded = std::lround(rep.dim);
  rep.dim_residual = std::abs(rep.dim - static_cast<double>(rep.rounded));
  bool ok = rep.dim_residual <= 10 * tol.abs_eps && rep.rounded >= 1;
  int top = static_cast<int>(std::min<long>(rep.rounded + 2, kMaxStrands));
  for (int n = 2; n <= top; ++n) {
    TraceReport t = trace_antisymmetrizer(x, n, SymmetryKind::plain, tol);
    if (t.trace < -10 * tol.abs_eps) ok = false;
    rep.traces.push_back(t);
  }
  rep.pass = ok;
  return rep;
}

namespace {

std::vector<std::vector<int>> all_oneline(int n) {
  std::vector<int> ol(n);
  for (int i = 0; i < n; ++i) ol[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(ol);
  } while (std::next_permutation(ol.begin(), ol.end()));
  return out;
}

}  // namespace

RepObject determinant(const RepObject& x, SymmetryKind kind, const Tolerance& tol) {
  if (x.dim == 0) fail("ZeroObject", "determinant of the zero object is undefined");
  if (kind == SymmetryKind::super) {
    Morphism th = twist(x, SymmetryKind::super, tol);
    if (max_abs_diff(th.mat, ident(x.dim)) > 1e-7)
      fail("OddCategory", "determinant is defined in the even setting");
  }
  const double d_real = dimension(x);
  const int d = static_cast<int>(std::lround(d_real));
  if (std::abs(d_real - d) > 1e-6) fail("BadInput", "non-integral dimension");
  if (d == 1) return x;
  if (d <= 4) {
    Morphism a = antisymmetrizer(x, d, SymmetryKind::plain);
    Subobject sub = subobject(a.src, a.mat, tol);
    if (sub.obj.dim != 1) fail("BadInput", "top antisymmetrizer rank is not 1");
    return sub.obj;
  }
  if (d > kMaxStrands) fail("DegreeOverflow", "determinant via enumeration limited to d <= 6");
  // Sparse route: pair the totally antisymmetric unit vector with itself
  // through pi(g)^(x)d without materializing the tensor power.
  auto perms = all_oneline(d);
  std::vector<int> signs;
  for (const auto& ol : perms) signs.push_back(Permutation::from_one_line(ol).sign());
  double fact = 1;
  for (int i = 2; i <= d; ++i) fact *= i;
  RepObject det1;
  det1.cat = x.cat;
  det1.dim = 1;
  for (int g = 0; g < x.cat->sg.group.order; ++g) {
    Complex acc = 0;
    const Mat& u = x.at(g);
    for (size_t a = 0; a < perms.size(); ++a)
      for (size_t b = 0; b < perms.size(); ++b) {
        Complex term = static_cast<double>(signs[a] * signs[b]);
        for (int p = 0; p < d; ++p) term *= u(perms[a][p], perms[b][p]);
        acc += term;
      }
    det1.matrices.push_back(scalar_mat(acc / fact));
  }
  return det1;
}

double iso1_residual(const RepObject& a, const RepObject& b, const Tolerance& tol) {
  if (a.dim != 1 || b.dim != 1) fail("BadInput", "iso witness helper handles 1-dim objects");
  auto basis = hom_basis(a, b, tol);
  if (basis.empty()) return std::numeric_limits<double>::infinity();
  Complex t = basis[0].mat(0, 0);
  double res = std::abs(std::abs(t) - 1.0);
  for (int g = 0; g < a.cat->sg.group.order; ++g)
    res = std::max(res, std::abs(t * a.at(g)(0, 0) - b.at(g)(0, 0) * t));
  return res;
}

DetCheckReport det_product_check(const RepObject& x, const RepObject& y, const Tolerance& tol) {
  DetCheckReport rep;
  RepObject dx = determinant(x, SymmetryKind::plain, tol);
  RepObject dy = determinant(y, SymmetryKind::plain, tol);
  RepObject dsum = determinant(direct_sum(x, y).obj, SymmetryKind::plain, tol);
  rep.sum_rule_residual = iso1_residual(dsum, tensor_obj(dx, dy), tol);
  RepObject dconj = determinant(conjugate_object(x), SymmetryKind::plain, tol);
  rep.conj_rule_residual = iso1_residual(dconj, conjugate_object(dx), tol);
  rep.pass = rep.sum_rule_residual <= 10 * tol.abs_eps && rep.conj_rule_residual <= 10 * tol.abs_eps;
  return rep;
}

Mat det_isometry(const RepObject& x, const Tolerance& tol) {
  const int d = static_cast<int>(std::lround(dimension(x)));
  if (d > 4) fail("DegreeOverflow", "dense determinant isometry limited to d <= 4");
  Morphism a = antisymmetrizer(x, d, SymmetryKind::plain);
  Mat v = orthonormal_range(a.mat, tol);
  if (v.cols() != 1) fail("BadInput", "top antisymmetrizer rank is not 1");
  return v;
}

ContractionReport contraction_identity(const RepObject& x, const Mat& s, const Tolerance& tol) {
  const int d = static_cast<int>(std::lround(dimension(x)));
  if (d > 4) fail("DegreeOverflow", "contraction check limited to d <= 4");
  if (iso1_residual(determinant(x, SymmetryKind::plain, tol), unit_object(x.cat), tol) > 1e-6)
    fail("DetNotTrivial", "contraction identity needs a trivial determinant");
  const long N = ipow(d, d);
  if (s.rows() != N || s.cols() != 1) fail("BadInput", "isometry has wrong shape");
  if (std::abs((s.adjoint() * s)(0, 0) - Complex(1, 0)) > 1e-8)
    fail("BadInput", "s is not an isometry");
  Mat a = projector_mats(x, d, SymmetryKind::plain).anti;
  if (max_abs_diff(Mat(s * s.adjoint()), a) > 1e-7)
    fail("BadInput", "s s* does not equal the top antisymmetrizer");

  const long stride = N / d;  // d^(d-1)
  Mat t = zeros(d, d);
  for (long flat = 0; flat < N; ++flat) {
    Complex sj = std::conj(s(flat, 0));
    if (sj == Complex(0, 0)) continue;
    long j1 = flat / stride, rest = flat % stride;
    for (int p = 0; p < d; ++p) t(p, j1) += sj * s(rest * d + p, 0);
  }
  ContractionReport rep;
  rep.expected = Complex((d % 2 == 1 ? 1.0 : -1.0) / d, 0);
  rep.residual = max_abs_diff(t, Mat(rep.expected * ident(d)));
  rep.pass = rep.residual <= 10 * tol.abs_eps;
  return rep;
}

StatisticsClass statistics_classify(const RepObject& x, SymmetryKind kind, const Tolerance& tol) {
  if (hom_basis(x, x, tol).size() != 1) fail("NotIrreducible", "statistics need an irreducible object");
  Morphism th = twist(x, kind, tol);
  Complex omega = th.mat(0, 0);
  if (max_abs_diff(th.mat, Mat(omega * ident(x.dim))) > 1e-7)
    fail("BadInput", "twist is not scalar on an irreducible object");
  double re = omega.real();
  if (std::abs(std::abs(re) - 1.0) > 1e-7 || std::abs(omega.imag()) > 1e-7)
    fail("BadInput", "twist phase is not a sign");
  StatisticsClass out;
  out.dimension = static_cast<int>(std::lround(dimension(x)));
  out.phase = re > 0 ? 1 : -1;
  out.kind = out.phase > 0 ? StatKind::para_bose : StatKind::para_fermi;
  out.order = out.dimension;
  return out;
}

}  // namespace stc
