#include "stc/repcat.hpp"

#include <cmath>

namespace stc {

namespace {

void require_same_group(const RepObject& x, const RepObject& y) {
  if (!x.same_group(y)) fail("GroupMismatch", "objects live over different groups");
}

int group_order(const RepObject& x) { return x.cat->sg.group.order; }

}  // namespace

RepObject rep_from_irrep(const CatalogPtr& cat, int irrep_index) {
  const Irrep& ir = cat->irreps.at(irrep_index);
  RepObject x;
  x.cat = cat;
  x.dim = ir.dim;
  x.matrices = ir.matrices;
  return x;
}

RepObject unit_object(const CatalogPtr& cat) {
  RepObject x;
  x.cat = cat;
  x.dim = 1;
  x.matrices.assign(cat->sg.group.order, ident(1));
  return x;
}

RepObject zero_object(const CatalogPtr& cat) {
  RepObject x;
  x.cat = cat;
  x.dim = 0;
  x.matrices.assign(cat->sg.group.order, zeros(0, 0));
  return x;
}

RepObject regular_rep(const CatalogPtr& cat) {
  const FiniteGroup& g = cat->sg.group;
  RepObject x;
  x.cat = cat;
  x.dim = g.order;
  for (int a = 0; a < g.order; ++a) {
    Mat m = zeros(g.order, g.order);
    for (int h = 0; h < g.order; ++h) m(g.op(a, h), h) = 1;
    x.matrices.push_back(std::move(m));
  }
  return x;
}

Morphism make_morphism(const RepObject& src, const RepObject& dst, Mat m) {
  require_same_group(src, dst);
  if (m.rows() != dst.dim || m.cols() != src.dim)
    fail("ShapeMismatch", "morphism matrix does not match src/dst dimensions");
  return Morphism{src, dst, std::move(m)};
}

bool is_morphism(const Morphism& f, const Tolerance& tol) {
  for (int g = 0; g < group_order(f.src); ++g)
    if (!approx_equal(Mat(f.mat * f.src.at(g)), Mat(f.dst.at(g) * f.mat), tol)) return false;
  return true;
}

Morphism identity_mor(const RepObject& x) { return Morphism{x, x, ident(x.dim)}; }

Morphism compose(const Morphism& g, const Morphism& f) {
  if (g.src.dim != f.dst.dim) fail("ShapeMismatch", "composition dimension mismatch");
  return Morphism{f.src, g.dst, Mat(g.mat * f.mat)};
}

Morphism adjoint(const Morphism& f) { return Morphism{f.dst, f.src, Mat(f.mat.adjoint())}; }

Morphism tensor_mor(const Morphism& s, const Morphism& t) {
  return Morphism{tensor_obj(s.src, t.src), tensor_obj(s.dst, t.dst), kron(s.mat, t.mat)};
}

std::vector<Morphism> hom_basis(const RepObject& x, const RepObject& y, const Tolerance& tol) {
  require_same_group(x, y);
  if (x.dim == 0 || y.dim == 0) return {};
  // Intertwiners vectorize (row-major) to invariant vectors of g -> pi_y(g) (x) conj(pi_x(g)).
  const Eigen::Index n = static_cast<Eigen::Index>(y.dim) * x.dim;
  Mat p = zeros(n, n);
  for (int g = 0; g < group_order(x); ++g) p += kron(y.at(g), x.at(g).conjugate());
  p /= static_cast<double>(group_order(x));
  Mat cols = orthonormal_range(p, tol);
  std::vector<Morphism> out;
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    Mat t(y.dim, x.dim);
    for (int i = 0; i < y.dim; ++i)
      for (int j = 0; j < x.dim; ++j) t(i, j) = cols(static_cast<Eigen::Index>(i) * x.dim + j, c);
    out.push_back(Morphism{x, y, std::move(t)});
  }
  return out;
}

RepObject tensor_obj(const RepObject& x, const RepObject& y) {
  require_same_group(x, y);
  RepObject z;
  z.cat = x.cat;
  z.dim = x.dim * y.dim;
  for (int g = 0; g < group_order(x); ++g) z.matrices.push_back(kron(x.at(g), y.at(g)));
  return z;
}

DirectSum direct_sum(const RepObject& x, const RepObject& y) {
  require_same_group(x, y);
  RepObject z;
  z.cat = x.cat;
  z.dim = x.dim + y.dim;
  for (int g = 0; g < group_order(x); ++g) {
    Mat m = zeros(z.dim, z.dim);
    m.topLeftCorner(x.dim, x.dim) = x.at(g);
    m.bottomRightCorner(y.dim, y.dim) = y.at(g);
    z.matrices.push_back(std::move(m));
  }
  Mat u = zeros(z.dim, x.dim), v = zeros(z.dim, y.dim);
  u.topRows(x.dim) = ident(x.dim);
  v.bottomRows(y.dim) = ident(y.dim);
  return DirectSum{z, Morphism{x, z, std::move(u)}, Morphism{y, z, std::move(v)}};
}

Subobject subobject(const RepObject& x, const Mat& p, const Tolerance& tol) {
  if (p.rows() != x.dim || p.cols() != x.dim) fail("ShapeMismatch", "projection shape mismatch");
  Mat v = orthonormal_range(p, tol);  // throws NotAProjection
  Morphism pm{x, x, p};
  if (!is_morphism(pm, Tolerance{std::max(tol.abs_eps * 100, 1e-8), tol.rel_eps}))
    fail("NotAMorphism", "projection does not commute with the representation");
  RepObject y;
  y.cat = x.cat;
  y.dim = static_cast<int>(v.cols());
  for (int g = 0; g < group_order(x); ++g) y.matrices.push_back(Mat(v.adjoint() * x.at(g) * v));
  return Subobject{y, Morphism{y, x, std::move(v)}};
}

std::vector<IrrepComponent> irrep_decompose(const RepObject& x, const Tolerance& tol) {
  std::vector<IrrepComponent> out;
  if (x.dim == 0) return out;
  int covered = 0;
  for (size_t i = 0; i < x.cat->irreps.size(); ++i) {
    RepObject xi = rep_from_irrep(x.cat, static_cast<int>(i));
    auto basis = hom_basis(xi, x, tol);
    if (basis.empty()) continue;
    IrrepComponent comp;
    comp.irrep_index = static_cast<int>(i);
    comp.multiplicity = static_cast<int>(basis.size());
    // Hilbert-Schmidt orthonormal T_a give T_a* T_b = (delta_ab / d) id by
    // irreducibility, so sqrt(d) T_a are orthogonal isometries.
    const double scale = std::sqrt(static_cast<double>(xi.dim));
    for (auto& t : basis) {
      t.mat *= scale;
      comp.isometries.push_back(t);
    }
    covered += comp.multiplicity * xi.dim;
    out.push_back(std::move(comp));
  }
  if (covered != x.dim)
    fail("IncompleteIrrepCatalog", "irreps cover " + std::to_string(covered) + " of " +
                                       std::to_string(x.dim) + " dimensions");
  return out;
}

namespace {

// Flat solution vector for a d-dim carrier pairing: r[(i,j)] = delta_ij.
Mat flat_pairing(int d) {
  Mat r = zeros(static_cast<Eigen::Index>(d) * d, 1);
  for (int i = 0; i < d; ++i) r(static_cast<Eigen::Index>(i) * d + i, 0) = 1;
  return r;
}

}  // namespace

RepObject conjugate_object(const RepObject& x) {
  RepObject xb;
  xb.cat = x.cat;
  xb.dim = x.dim;
  for (const Mat& m : x.matrices) xb.matrices.push_back(m.conjugate());
  return xb;
}

ConjugateSolution conjugate(const RepObject& x, const Tolerance& tol) {
  if (x.dim == 0) fail("ZeroObject", "zero objects have no conjugates");
  RepObject xb = conjugate_object(x);
  // Assemble r = sum_i (w_i (x) v_i) r_i over irreducible summands, with
  // w_i the entrywise conjugate of the isometry v_i and r_i the canonical
  // solution for the summand. Each block is normalized, so the result is
  // standard and the left and right traces agree.
  Mat r = zeros(static_cast<Eigen::Index>(x.dim) * x.dim, 1);
  Mat rbar = zeros(static_cast<Eigen::Index>(x.dim) * x.dim, 1);
  for (const auto& comp : irrep_decompose(x, tol)) {
    int d = x.cat->irreps[comp.irrep_index].dim;
    Mat ri = flat_pairing(d);
    for (const Morphism& iso : comp.isometries) {
      Mat w = iso.mat.conjugate();
      r += kron(w, iso.mat) * ri;
      rbar += kron(iso.mat, w) * ri;
    }
  }
  ConjugateSolution c;
  c.xbar = xb;
  c.r = Morphism{unit_object(x.cat), tensor_obj(xb, x), std::move(r)};
  c.rbar = Morphism{unit_object(x.cat), tensor_obj(x, xb), std::move(rbar)};
  c.standard = true;
  return c;
}

ConjugateSolution conjugate_tensor(const RepObject& x, const RepObject& y,
                                   const ConjugateSolution& cx, const ConjugateSolution& cy) {
  require_same_group(x, y);
  RepObject carrier = tensor_obj(cy.xbar, cx.xbar);
  RepObject xy = tensor_obj(x, y);
  // r'' = (id_ybar (x) r_x (x) id_y) o r_y,  rbar'' = (id_x (x) rbar_y (x) id_xbar) o rbar_x
  Mat r = kron(kron(ident(cy.xbar.dim), cx.r.mat), ident(y.dim)) * cy.r.mat;
  Mat rbar = kron(kron(ident(x.dim), cy.rbar.mat), ident(cx.xbar.dim)) * cx.rbar.mat;
  ConjugateSolution c;
  c.xbar = carrier;
  c.r = Morphism{unit_object(x.cat), tensor_obj(carrier, xy), std::move(r)};
  c.rbar = Morphism{unit_object(x.cat), tensor_obj(xy, carrier), std::move(rbar)};
  c.standard = cx.standard && cy.standard;
  return c;
}

double conjugate_equations_residual(const RepObject& x, const ConjugateSolution& c) {
  const int dx = x.dim, db = c.xbar.dim;
  Mat lhs1 = kron(c.rbar.mat.adjoint(), ident(dx)) * kron(ident(dx), c.r.mat);
  Mat lhs2 = kron(c.r.mat.adjoint(), ident(db)) * kron(ident(db), c.rbar.mat);
  return std::max(max_abs_diff(lhs1, ident(dx)), max_abs_diff(lhs2, ident(db)));
}

namespace {

// r* (id (x) a) r via the reshape of r into a (dbar x d) matrix.
Complex left_trace(const Mat& r, const Mat& a, int dbar, int d) {
  Mat rm(dbar, d);
  for (int i = 0; i < dbar; ++i)
    for (int j = 0; j < d; ++j) rm(i, j) = r(static_cast<Eigen::Index>(i) * d + j, 0);
  Mat m = rm.adjoint() * rm;
  return (a.cwiseProduct(m)).sum();
}

// rbar* (a (x) id) rbar via the reshape of rbar into a (d x dbar) matrix.
Complex right_trace(const Mat& rbar, const Mat& a, int d, int dbar) {
  Mat rm(d, dbar);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < dbar; ++q) rm(p, q) = rbar(static_cast<Eigen::Index>(p) * dbar + q, 0);
  Mat n = rm * rm.adjoint();
  return (a.cwiseProduct(n.transpose())).sum();
}

}  // namespace

double standardness_residual(const RepObject& x, const ConjugateSolution& c, const Tolerance& tol) {
  double worst = 0;
  for (const Morphism& a : hom_basis(x, x, tol)) {
    Complex l = left_trace(c.r.mat, a.mat, c.xbar.dim, x.dim);
    Complex rt = right_trace(c.rbar.mat, a.mat, x.dim, c.xbar.dim);
    worst = std::max(worst, std::abs(l - rt));
  }
  return worst;
}

Complex trace_morphism(const Morphism& a, const ConjugateSolution& c) {
  if (a.src.dim != a.dst.dim || a.mat.rows() != a.mat.cols())
    fail("NotEndomorphism", "trace requires an endomorphism");
  if (!c.standard) fail("BadInput", "trace requires a standard conjugate solution");
  return left_trace(c.r.mat, a.mat, c.xbar.dim, a.src.dim);
}

double dimension(const RepObject& x) {
  if (x.dim == 0) fail("ZeroObject", "dimension of the zero object is undefined here");
  ConjugateSolution c = conjugate(x);
  Complex d = trace_morphism(identity_mor(x), c);
  return d.real();
}

Mat grading_operator(const RepObject& x) {
  if (!x.cat->sg.has_k()) return ident(x.dim);
  return x.at(x.cat->sg.k);
}

Morphism symmetry(const RepObject& x, const RepObject& y, SymmetryKind kind) {
  require_same_group(x, y);
  const int dx = x.dim, dy = y.dim;
  Mat flip = zeros(static_cast<Eigen::Index>(dx) * dy, static_cast<Eigen::Index>(dx) * dy);
  for (int i = 0; i < dx; ++i)
    for (int j = 0; j < dy; ++j)
      flip(static_cast<Eigen::Index>(j) * dx + i, static_cast<Eigen::Index>(i) * dy + j) = 1;
  if (kind == SymmetryKind::plain)
    return Morphism{tensor_obj(x, y), tensor_obj(y, x), std::move(flip)};
  if (!x.cat->sg.has_k())
    fail("NoCentralInvolution", "super symmetry needs a distinguished involution k");
  Mat px = (ident(dx) - grading_operator(x)) / 2.0;
  Mat py = (ident(dy) - grading_operator(y)) / 2.0;
  Mat sign = ident(static_cast<Eigen::Index>(dx) * dy) - 2.0 * kron(px, py);
  return Morphism{tensor_obj(x, y), tensor_obj(y, x), Mat(flip * sign)};
}

Morphism twist(const RepObject& x, SymmetryKind kind, const Tolerance& tol) {
  if (x.dim == 0) fail("ZeroObject", "twist of the zero object is undefined");
  ConjugateSolution cs = conjugate(x, tol);
  Mat c = symmetry(x, x, kind).mat;
  const int d = x.dim;
  Mat rm(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rm(i, j) = cs.r.mat(static_cast<Eigen::Index>(i) * d + j, 0);
  Mat m = rm.adjoint() * rm;
  // theta[b,q] = sum_{a,j} m[a,j] c[(a,b),(j,q)]
  Mat theta = zeros(d, d);
  for (int b = 0; b < d; ++b)
    for (int q = 0; q < d; ++q) {
      Complex acc = 0;
      for (int a = 0; a < d; ++a)
        for (int j = 0; j < d; ++j)
          acc += m(a, j) * c(static_cast<Eigen::Index>(a) * d + b, static_cast<Eigen::Index>(j) * d + q);
      theta(b, q) = acc;
    }
  return Morphism{x, x, std::move(theta)};
}

}  // namespace stc
