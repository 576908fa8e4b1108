#include "stc/symalg.hpp"

#include <algorithm>
#include <cmath>

namespace stc {

namespace {

long ipow(int d, int n) {
  long r = 1;
  for (int i = 0; i < n; ++i) r *= d;
  return r;
}

// Permutation of tensor legs: output slot t carries source leg out_src[t].
Mat leg_permutation(const std::vector<long>& dims, const std::vector<int>& out_src) {
  const int k = static_cast<int>(dims.size());
  long total = 1;
  for (long d : dims) total *= d;
  std::vector<long> out_dims(k);
  for (int t = 0; t < k; ++t) out_dims[t] = dims[static_cast<size_t>(out_src[t])];
  Mat p = zeros(total, total);
  std::vector<long> idx(k, 0);
  for (long flat_in = 0; flat_in < total; ++flat_in) {
    long flat_out = 0;
    for (int t = 0; t < k; ++t) flat_out = flat_out * out_dims[t] + idx[static_cast<size_t>(out_src[t])];
    p(flat_out, flat_in) = 1;
    for (int t = k - 1; t >= 0; --t) {
      if (++idx[t] < dims[static_cast<size_t>(t)]) break;
      idx[t] = 0;
    }
  }
  return p;
}

}  // namespace

GradedObject symmetric_powers(const RepObject& z, int max_degree, SymmetryKind kind,
                              const Tolerance& tol) {
  if (z.dim == 0) fail("ZeroObject", "symmetric powers need a nonzero base");
  if (max_degree < 0 || ipow(z.dim, max_degree) > 4096)
    fail("DegreeOverflow", "truncation degree too large for dense components");
  if (kind == SymmetryKind::super) {
    Morphism th = twist(z, SymmetryKind::super, tol);
    if (max_abs_diff(th.mat, ident(z.dim)) > 1e-7)
      fail("OddCategory", "symmetric powers are defined in the even setting");
  }
  GradedObject g;
  g.base = z;
  g.max_degree = max_degree;
  g.components.push_back(GradedComponent{unit_object(z.cat), ident(1)});
  if (max_degree >= 1) g.components.push_back(GradedComponent{z, ident(z.dim)});
  RepObject zn = z;
  for (int n = 2; n <= max_degree; ++n) {
    zn = tensor_obj(zn, z);
    Morphism s = symmetrizer(z, n, SymmetryKind::plain);
    Subobject sub = subobject(zn, s.mat, tol);
    g.components.push_back(GradedComponent{sub.obj, sub.v.mat});
  }
  return g;
}

Mat graded_mult(const GradedObject& g, int i, int j) {
  if (i < 0 || j < 0 || i + j > g.max_degree)
    fail("DegreeOverflow", "multiplication component past the truncation degree");
  const Mat& ui = g.components[static_cast<size_t>(i)].u;
  const Mat& uj = g.components[static_cast<size_t>(j)].u;
  const Mat& uk = g.components[static_cast<size_t>(i + j)].u;
  return uk.adjoint() * kron(ui, uj);
}

std::vector<std::vector<Mat>> mult_maps(const GradedObject& g) {
  std::vector<std::vector<Mat>> m(static_cast<size_t>(g.max_degree) + 1);
  for (int i = 0; i <= g.max_degree; ++i)
    for (int j = 0; i + j <= g.max_degree; ++j)
      m[static_cast<size_t>(i)].push_back(graded_mult(g, i, j));
  return m;
}

GradedMultReport verify_mult_maps(const GradedObject& g, const Tolerance& tol) {
  auto m = mult_maps(g);
  GradedMultReport rep;
  const int N = g.max_degree;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; i + j <= N; ++j) {
      for (int k = 0; i + j + k <= N; ++k) {
        Mat lhs = m[i + j][k] * kron(m[i][j], ident(g.dim(k)));
        Mat rhs = m[i][j + k] * kron(ident(g.dim(i)), m[j][k]);
        rep.assoc_residual = std::max(rep.assoc_residual, max_abs_diff(lhs, rhs));
      }
      Mat c = symmetry(g.components[i].space, g.components[j].space, SymmetryKind::plain).mat;
      rep.comm_residual = std::max(rep.comm_residual, max_abs_diff(m[i][j], Mat(m[j][i] * c)));
      if (j == 0) {
        rep.unit_residual =
            std::max(rep.unit_residual, max_abs_diff(m[i][0], ident(g.dim(i))));
        rep.unit_residual =
            std::max(rep.unit_residual, max_abs_diff(m[0][i], ident(g.dim(i))));
      }
    }
  rep.pass = rep.assoc_residual <= 10 * tol.abs_eps && rep.comm_residual <= 10 * tol.abs_eps &&
             rep.unit_residual <= 10 * tol.abs_eps;
  return rep;
}

MonoidReport verify_monoid(const MonoidObject& q, bool commutative, const Tolerance& tol) {
  MonoidReport rep;
  const long n = q.carrier.dim;
  const Mat& m = q.m.mat;
  // associativity column by column: both sides act on basis triples
  for (long a = 0; a < n; ++a) {
    // v_ab = m(e_a x e_b) once per pair
    for (long b = 0; b < n; ++b) {
      Vec v = m.col(a * n + b);
      for (long c = 0; c < n; ++c) {
        Vec lhs = Vec::Zero(n), rhs = Vec::Zero(n);
        for (long p = 0; p < n; ++p) {
          if (v(p) != Complex(0, 0)) lhs += v(p) * m.col(p * n + c);
        }
        Vec w = m.col(b * n + c);
        for (long p = 0; p < n; ++p) {
          if (w(p) != Complex(0, 0)) rhs += w(p) * m.col(a * n + p);
        }
        double diff = (lhs - rhs).cwiseAbs().maxCoeff();
        rep.assoc_residual = std::max(rep.assoc_residual, diff);
      }
    }
  }
  // unit laws
  const Vec& e = q.eta.mat.col(0);
  for (long a = 0; a < n; ++a) {
    Vec left = Vec::Zero(n), right = Vec::Zero(n);
    for (long p = 0; p < n; ++p) {
      if (e(p) != Complex(0, 0)) {
        left += e(p) * m.col(p * n + a);
        right += e(p) * m.col(a * n + p);
      }
    }
    Vec basis = Vec::Zero(n);
    basis(a) = 1;
    rep.unit_residual = std::max(rep.unit_residual, (left - basis).cwiseAbs().maxCoeff());
    rep.unit_residual = std::max(rep.unit_residual, (right - basis).cwiseAbs().maxCoeff());
  }
  if (commutative) {
    for (long a = 0; a < n; ++a)
      for (long b = 0; b < n; ++b)
        rep.comm_residual = std::max(
            rep.comm_residual,
            (m.col(a * n + b) - m.col(b * n + a)).cwiseAbs().maxCoeff());
  }
  rep.pass = rep.assoc_residual <= 10 * tol.abs_eps && rep.unit_residual <= 10 * tol.abs_eps &&
             rep.comm_residual <= 10 * tol.abs_eps;
  return rep;
}

MonoidObject trivial_monoid(CatalogPtr cat) {
  RepObject one = unit_object(cat);
  MonoidObject q;
  q.carrier = one;
  q.m = make_morphism(tensor_obj(one, one), one, ident(1));
  q.eta = make_morphism(one, one, ident(1));
  return q;
}

MonoidObject product_monoid(const MonoidObject& q1, const MonoidObject& q2, SymmetryKind kind,
                            const Tolerance& tol) {
  if (!verify_monoid(q1, true, tol).pass || !verify_monoid(q2, true, tol).pass)
    fail("AxiomViolation", "direct product needs commutative monoid inputs");
  const long n1 = q1.carrier.dim, n2 = q2.carrier.dim;
  Mat c = symmetry(q2.carrier, q1.carrier, kind).mat;
  Mat shuffle = kron(ident(n1), kron(c, ident(n2)));
  Mat m = kron(q1.m.mat, q2.m.mat) * shuffle;
  MonoidObject out;
  out.carrier = tensor_obj(q1.carrier, q2.carrier);
  out.m = make_morphism(tensor_obj(out.carrier, out.carrier), out.carrier, std::move(m));
  out.eta = make_morphism(unit_object(q1.carrier.cat), out.carrier,
                          kron(q1.eta.mat, q2.eta.mat));
  if (!verify_monoid(out, true, tol).pass)
    fail("AxiomViolation", "direct product monoid failed its axioms");
  return out;
}

long GradedMonoid::comp_dim(const MultiDeg& deg) const {
  long n = 1;
  for (int d : deg) n *= g.dim(d);
  return n;
}

Mat GradedMonoid::comp_mult(const MultiDeg& gamma, const MultiDeg& delta) const {
  if (static_cast<int>(gamma.size()) != factors || static_cast<int>(delta.size()) != factors)
    fail("BadInput", "multidegree length mismatch");
  // interleave legs (gamma_1..gamma_f, delta_1..delta_f) into pairs, then
  // multiply each factor with m_{gamma_l, delta_l}
  std::vector<long> dims;
  for (int d : gamma) dims.push_back(g.dim(d));
  for (int d : delta) dims.push_back(g.dim(d));
  std::vector<int> out_src;
  for (int l = 0; l < factors; ++l) {
    out_src.push_back(l);
    out_src.push_back(factors + l);
  }
  Mat p = leg_permutation(dims, out_src);
  Mat blocks = ident(1);
  for (int l = 0; l < factors; ++l)
    blocks = kron(blocks, m[static_cast<size_t>(gamma[l])][static_cast<size_t>(delta[l])]);
  return blocks * p;
}

GradedMonoid graded_power_monoid(const GradedObject& g, int factors) {
  if (factors < 1) fail("BadInput", "need at least one factor");
  GradedMonoid q;
  q.g = g;
  q.factors = factors;
  q.m = mult_maps(g);
  return q;
}

GradedMor monoid_unit(const GradedMonoid& q) {
  GradedMor u;
  u.src_dim = 1;
  u.comps[MultiDeg(static_cast<size_t>(q.factors), 0)] = ident(1);
  return u;
}

GradedMor monoid_apply(const GradedMonoid& q, const GradedMor& a, const GradedMor& b) {
  GradedMor out;
  out.src_dim = a.src_dim * b.src_dim;
  for (const auto& [gamma, ga] : a.comps)
    for (const auto& [delta, gb] : b.comps) {
      MultiDeg target(gamma.size());
      bool keep = true;
      for (size_t l = 0; l < gamma.size(); ++l) {
        target[l] = gamma[l] + delta[l];
        if (target[l] > q.g.max_degree) keep = false;  // truncated away
      }
      if (!keep) continue;
      Mat contrib = q.comp_mult(gamma, delta) * kron(ga, gb);
      auto it = out.comps.find(target);
      if (it == out.comps.end())
        out.comps.emplace(target, std::move(contrib));
      else
        it->second += contrib;
    }
  return out;
}

GradedMor graded_compose(const GradedMor& a, const Mat& pre) {
  if (a.src_dim != pre.rows()) fail("ShapeMismatch", "graded composition shape mismatch");
  GradedMor out;
  out.src_dim = static_cast<int>(pre.cols());
  for (const auto& [deg, mat] : a.comps) out.comps.emplace(deg, Mat(mat * pre));
  return out;
}

double graded_distance(const GradedMor& a, const GradedMor& b) {
  double r = 0;
  for (const auto& [deg, mat] : a.comps) {
    auto it = b.comps.find(deg);
    r = std::max(r, it == b.comps.end() ? mat.cwiseAbs().maxCoeff()
                                        : max_abs_diff(mat, it->second));
  }
  for (const auto& [deg, mat] : b.comps)
    if (!a.comps.count(deg)) r = std::max(r, mat.cwiseAbs().maxCoeff());
  return r;
}

double graded_norm(const GradedMor& a) {
  double s = 0;
  for (const auto& [deg, mat] : a.comps) s += mat.squaredNorm();
  return std::sqrt(s);
}

namespace {

std::vector<MultiDeg> all_multidegrees(int factors, int max_degree) {
  std::vector<MultiDeg> out;
  MultiDeg cur(static_cast<size_t>(factors), 0);
  while (true) {
    out.push_back(cur);
    int t = factors - 1;
    while (t >= 0 && cur[static_cast<size_t>(t)] == max_degree) {
      cur[static_cast<size_t>(t)] = 0;
      --t;
    }
    if (t < 0) return out;
    ++cur[static_cast<size_t>(t)];
  }
}

RepObject multideg_space(const GradedObject& g, const MultiDeg& deg) {
  RepObject acc = unit_object(g.base.cat);
  for (int d : deg) acc = tensor_obj(acc, g.components[static_cast<size_t>(d)].space);
  return acc;
}

}  // namespace

MonoidObject dense_monoid(const GradedMonoid& q) {
  auto degs = all_multidegrees(q.factors, q.g.max_degree);
  std::map<MultiDeg, long> offset;
  long total = 0;
  for (const auto& d : degs) {
    offset[d] = total;
    total += q.comp_dim(d);
  }
  if (total > 256) fail("DegreeOverflow", "dense assembly limited to small carriers");
  // carrier: direct sum over multidegrees of the component tensor products
  RepObject carrier;
  carrier.cat = q.g.base.cat;
  carrier.dim = static_cast<int>(total);
  for (int gel = 0; gel < q.g.base.cat->sg.group.order; ++gel) {
    Mat u = zeros(total, total);
    for (const auto& d : degs) {
      RepObject sp = multideg_space(q.g, d);
      u.block(offset[d], offset[d], sp.dim, sp.dim) = sp.at(gel);
    }
    carrier.matrices.push_back(std::move(u));
  }
  Mat m = zeros(total, total * total);
  for (const auto& ga : degs)
    for (const auto& gb : degs) {
      MultiDeg target(ga.size());
      bool keep = true;
      for (size_t l = 0; l < ga.size(); ++l) {
        target[l] = ga[l] + gb[l];
        if (target[l] > q.g.max_degree) keep = false;
      }
      if (!keep) continue;
      Mat block = q.comp_mult(ga, gb);
      const long da = q.comp_dim(ga), db = q.comp_dim(gb);
      const long to = offset[target];
      for (long a = 0; a < da; ++a)
        for (long b = 0; b < db; ++b)
          m.block(to, (offset[ga] + a) * total + offset[gb] + b, block.rows(), 1) =
              block.col(a * db + b);
    }
  MonoidObject out;
  out.carrier = carrier;
  out.m = make_morphism(tensor_obj(carrier, carrier), carrier, std::move(m));
  Mat eta = zeros(total, 1);
  eta(offset[MultiDeg(static_cast<size_t>(q.factors), 0)], 0) = 1;
  out.eta = make_morphism(unit_object(carrier.cat), carrier, std::move(eta));
  return out;
}

AbsorptionResult absorption_morphisms(const RepObject& z, const GradedObject& g,
                                      const Tolerance& tol) {
  if (g.base.dim != z.dim || g.base.cat.get() != z.cat.get())
    fail("BadInput", "graded object does not sit over the given base");
  if (g.max_degree < 2) fail("DegreeOverflow", "need truncation degree at least 2");
  const int d = static_cast<int>(std::lround(dimension(z)));
  if (d < 1 || d > 4) fail("DegreeOverflow", "absorption data limited to dimension <= 4");
  if (iso1_residual(determinant(z, SymmetryKind::plain, tol), unit_object(z.cat), tol) > 1e-6)
    fail("DetNotTrivial", "absorption morphisms need a trivial determinant");

  AbsorptionResult res;
  res.data.s = det_isometry(z, tol);
  GradedMonoid q = graded_power_monoid(g, d);

  const long zrank = z.dim;
  for (int i = 1; i <= d; ++i) {
    GradedMor ui;
    ui.src_dim = static_cast<int>(zrank);
    MultiDeg du(static_cast<size_t>(d), 0);
    du[static_cast<size_t>(i - 1)] = 1;
    ui.comps[du] = ident(zrank);
    res.data.u.push_back(std::move(ui));

    GradedMor ti;
    ti.src_dim = static_cast<int>(ipow(z.dim, d - 1));
    MultiDeg dt(static_cast<size_t>(d), 1);
    dt[static_cast<size_t>(i - 1)] = 0;
    double sign = (d - i) % 2 == 0 ? 1.0 : -1.0;
    ti.comps[dt] = sign * ident(ipow(z.dim, d - 1));
    res.data.t.push_back(std::move(ti));
  }
  res.data.f.src_dim = 1;
  res.data.f.comps[MultiDeg(static_cast<size_t>(d), 1)] = res.data.s;

  res.report.d = d;
  res.report.f_norm = graded_norm(res.data.f);
  res.report.residuals.assign(static_cast<size_t>(d), std::vector<double>(static_cast<size_t>(d), 0));
  GradedMor zero;
  zero.src_dim = 1;
  bool ok = res.report.f_norm > 100 * tol.abs_eps;
  for (int j = 1; j <= d; ++j)
    for (int i = 1; i <= d; ++i) {
      GradedMor lhs = graded_compose(
          monoid_apply(q, res.data.t[static_cast<size_t>(j - 1)], res.data.u[static_cast<size_t>(i - 1)]),
          res.data.s);
      double r = graded_distance(lhs, i == j ? res.data.f : zero);
      res.report.residuals[static_cast<size_t>(j - 1)][static_cast<size_t>(i - 1)] = r;
      if (r > 10 * tol.abs_eps) ok = false;
    }
  res.report.pass = ok;
  return res;
}

std::vector<int> gamma_grading(const GradedObject& g, const Tolerance& tol) {
  std::vector<int> dims;
  RepObject one = unit_object(g.base.cat);
  for (const auto& comp : g.components)
    dims.push_back(static_cast<int>(hom_basis(one, comp.space, tol).size()));
  return dims;
}

RegularMonoidResult regular_monoid(CatalogPtr cat, const Tolerance& tol) {
  const int n = cat->sg.group.order;
  RepObject q = regular_rep(cat);
  Mat mm = zeros(n, static_cast<long>(n) * n);
  for (long a = 0; a < n; ++a) mm(a, a * n + a) = 1;
  Mat ones = Mat::Ones(n, 1);

  RegularMonoidResult res;
  res.monoid.carrier = q;
  res.monoid.m = make_morphism(tensor_obj(q, q), q, std::move(mm));
  res.monoid.eta = make_morphism(unit_object(cat), q, std::move(ones));
  const Mat& m = res.monoid.m.mat;

  auto& rep = res.report;
  rep.axioms = verify_monoid(res.monoid, true, tol);
  RepObject one = unit_object(cat);
  rep.hom_unit_dim = static_cast<int>(hom_basis(one, q, tol).size());

  // module endomorphisms of (Q, m): intertwiners e with e m = m (id x e)
  auto endo = hom_basis(q, q, tol);
  {
    Mat sys(static_cast<long>(n) * n * n, static_cast<long>(endo.size()));
    for (size_t a = 0; a < endo.size(); ++a) {
      const Mat& t = endo[a].mat;
      Mat lhs = t * m;          // n x n^2
      Mat rhs(n, static_cast<long>(n) * n);
      for (long p = 0; p < n; ++p)
        rhs.middleCols(p * n, n) = m.middleCols(p * n, n) * t;
      Mat diff = lhs - rhs;
      sys.col(static_cast<long>(a)) =
          Eigen::Map<const Vec>(diff.data(), diff.size());
    }
    Mat null = nullspace(sys, tol);
    rep.end_module_dim = static_cast<int>(null.cols());
    rep.gamma_residual = 0;
    for (long c = 0; c < null.cols(); ++c) {
      Mat e = zeros(n, n);
      for (size_t a = 0; a < endo.size(); ++a) e += null(static_cast<long>(a), c) * endo[a].mat;
      Vec ge = e * res.monoid.eta.mat;  // gamma(e) in Hom(1, Q)
      double norm = ge.norm();
      if (norm < 100 * tol.abs_eps) {
        rep.gamma_residual = 1;  // gamma killed a module endomorphism
        continue;
      }
      Complex mean = ge.sum() / static_cast<double>(n);
      rep.gamma_residual = std::max(
          rep.gamma_residual, (ge - mean * Vec::Ones(n)).cwiseAbs().maxCoeff() / norm);
    }
  }

  bool ok = rep.axioms.pass && rep.hom_unit_dim == 1 && rep.end_module_dim == 1 &&
            rep.gamma_residual <= 10 * tol.abs_eps;

  for (size_t xi = 0; xi < cat->irreps.size(); ++xi) {
    RepObject x = rep_from_irrep(cat, static_cast<int>(xi));
    const int dx = x.dim;
    RepObject qx = tensor_obj(q, x);
    auto invariants = hom_basis(one, qx, tol);
    ModuleSplit split;
    split.irrep_index = static_cast<int>(xi);
    split.multiplicity = static_cast<int>(invariants.size());

    // module maps Q -> Q x X from invariant vectors: phi = (m x id)(id x v)
    std::vector<Mat> phi;
    for (const auto& v : invariants) {
      Mat f(static_cast<long>(n) * dx, n);
      Mat vmat(n, dx);
      for (long p = 0; p < n; ++p)
        for (int r = 0; r < dx; ++r) vmat(p, r) = v.mat(p * dx + r, 0);
      for (long a = 0; a < n; ++a) {
        // (m x id)(e_a x v): multiply m(e_a x .) into the Q leg of v
        Mat w = m.middleCols(a * n, n) * vmat;  // n x dx
        for (long p = 0; p < n; ++p)
          for (int r = 0; r < dx; ++r) f(p * dx + r, a) = w(p, r);
      }
      phi.push_back(std::move(f));
    }
    // orthonormalize: the Gram of module maps is scalar in End(Q)
    const size_t k = phi.size();
    Mat gram(static_cast<long>(k), static_cast<long>(k));
    for (size_t a = 0; a < k; ++a)
      for (size_t b = 0; b < k; ++b)
        gram(static_cast<long>(a), static_cast<long>(b)) =
            (phi[a].adjoint() * phi[b]).trace() / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    std::vector<Mat> qmaps;
    for (long c = 0; c < static_cast<long>(k); ++c) {
      if (es.eigenvalues()(c) < 100 * tol.abs_eps) continue;
      Mat qi = zeros(static_cast<long>(n) * dx, n);
      for (size_t a = 0; a < k; ++a)
        qi += es.eigenvectors()(static_cast<long>(a), c) * phi[a];
      qmaps.push_back(qi / std::sqrt(es.eigenvalues()(c)));
    }
    Mat total = zeros(static_cast<long>(n) * dx, static_cast<long>(n) * dx);
    for (const Mat& qi : qmaps) {
      split.isometry_residual = std::max(
          split.isometry_residual, max_abs_diff(Mat(qi.adjoint() * qi), ident(n)));
      // module law: q m = (m x id)(id x q)
      Mat lhs = qi * m;
      Mat rhs(static_cast<long>(n) * dx, static_cast<long>(n) * n);
      for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b) {
          Mat v = qi.col(b);
          Mat vmat(n, dx);
          for (long p = 0; p < n; ++p)
            for (int r = 0; r < dx; ++r) vmat(p, r) = v(p * dx + r, 0);
          Mat w = m.middleCols(a * n, n) * vmat;
          for (long p = 0; p < n; ++p)
            for (int r = 0; r < dx; ++r) rhs(p * dx + r, a * n + b) = w(p, r);
        }
      split.module_law_residual = std::max(split.module_law_residual, max_abs_diff(lhs, rhs));
      total += qi * qi.adjoint();
    }
    split.completeness_residual = max_abs_diff(total, ident(static_cast<long>(n) * dx));
    if (split.multiplicity != dx || static_cast<int>(qmaps.size()) != dx ||
        split.isometry_residual > 10 * tol.abs_eps ||
        split.module_law_residual > 10 * tol.abs_eps ||
        split.completeness_residual > 10 * tol.abs_eps)
      ok = false;
    rep.splits.push_back(std::move(split));
  }
  rep.pass = ok;
  return res;
}

}  // namespace stc
