#include "stc/tannaka.hpp"

#include <algorithm>
#include <cmath>

namespace stc {

namespace {

// character table rows chi_i(g) = tr pi_i(g)
std::vector<Vec> irrep_chars(const CatalogPtr& cat) {
  const int n = cat->sg.group.order;
  std::vector<Vec> out;
  for (const auto& ir : cat->irreps) {
    Vec chi(n);
    for (int g = 0; g < n; ++g) chi(g) = ir.matrices[g].trace();
    out.push_back(chi);
  }
  return out;
}

int match_character(const std::vector<Vec>& table, const Vec& chi) {
  for (int j = 0; j < (int)table.size(); ++j)
    if ((table[j] - chi).cwiseAbs().maxCoeff() < 1e-6) return j;
  fail("IncompleteIrrepCatalog", "no irrep with the required character");
}

// one global phase for the whole matrix, so intertwining is preserved
Mat fix_global_phase(Mat m) {
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > 1e-9) return Mat(m * (std::abs(m(r, c)) / m(r, c)));
  return m;
}

// row-major reshape of a flat column vector
Mat reshape_rm(const Mat& v, long rows, long cols) {
  if (v.size() != rows * cols) fail("ShapeMismatch", "reshape size mismatch");
  Mat out(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) out(i, j) = v(i * cols + j);
  return out;
}

Mat pseudo_inverse(const Mat& a, const Tolerance& tol, const char* err) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const long k = std::min(a.rows(), a.cols());
  const double cut = std::max(tol.abs_eps, s(0) * 1e-10);
  Mat sinv = Mat::Zero(k, k);
  for (long i = 0; i < k; ++i) {
    if (s(i) < cut) fail(err, "rank-deficient strictification basis");
    sinv(i, i) = 1.0 / s(i);
  }
  return svd.matrixV() * sinv * svd.matrixU().adjoint();
}

void check_group_candidates(const FiberFunctor& e) {
  if (e.group_images.empty())
    fail("BadInput", "functor carries no canonical group candidates");
}

}  // namespace

int trivial_irrep_index(const CatalogPtr& cat) {
  for (int i = 0; i < (int)cat->irreps.size(); ++i) {
    const auto& ir = cat->irreps[i];
    if (ir.dim != 1) continue;
    bool triv = true;
    for (const auto& m : ir.matrices)
      if (std::abs(m(0, 0) - Complex(1, 0)) > 1e-8) triv = false;
    if (triv) return i;
  }
  fail("IncompleteIrrepCatalog", "catalog lacks the trivial irrep");
}

ConjPairing conj_pairing(const CatalogPtr& cat, const Tolerance& tol) {
  const int nI = (int)cat->irreps.size();
  auto table = irrep_chars(cat);
  ConjPairing out;
  out.partner.resize(nI);
  out.r.resize(nI);
  out.rbar.resize(nI);
  for (int i = 0; i < nI; ++i) out.partner[i] = match_character(table, table[i].conjugate());

  for (int i = 0; i < nI; ++i) {
    const int ib = out.partner[i];
    if (ib < i) continue;
    RepObject x = rep_from_irrep(cat, i);
    RepObject xb = rep_from_irrep(cat, ib);
    ConjugateSolution cs = conjugate(x, tol);
    auto hb = hom_basis(xb, cs.xbar, tol);
    if (hb.size() != 1) fail("IncompleteIrrepCatalog", "conjugate irrep not identified");
    Mat u = fix_global_phase(hb[0].mat * std::sqrt(double(x.dim)));
    if (!is_unitary(u, tol)) fail("AxiomViolation", "conjugate identification not unitary");
    Mat r = kron(u.adjoint(), ident(x.dim)) * cs.r.mat;      // unit -> xb (x) x
    Mat rb = kron(ident(x.dim), u.adjoint()) * cs.rbar.mat;  // unit -> x (x) xb
    for (int g = 0; g < cat->sg.group.order; ++g) {
      double inv1 = max_abs_diff(Mat(kron(xb.at(g), x.at(g)) * r), r);
      double inv2 = max_abs_diff(Mat(kron(x.at(g), xb.at(g)) * rb), rb);
      if (std::max(inv1, inv2) > 1e-8)
        fail("AxiomViolation", "conjugate pairing is not invariant");
    }
    // conjugate equations for the transported pair
    Mat eq1 = kron(rb.adjoint(), ident(x.dim)) * kron(ident(x.dim), r);
    Mat eq2 = kron(r.adjoint(), ident(xb.dim)) * kron(ident(xb.dim), rb);
    if (max_abs_diff(eq1, ident(x.dim)) > 1e-8 || max_abs_diff(eq2, ident(xb.dim)) > 1e-8)
      fail("AxiomViolation", "transported conjugate equations fail");
    out.r[i] = r;
    out.rbar[i] = rb;
    if (ib != i) {
      out.r[ib] = rb;  // partner convention: conjugate of xb is x with swapped pair
      out.rbar[ib] = r;
    }
  }
  return out;
}

FiberFunctor forgetful(CatalogPtr cat) {
  FiberFunctor e;
  e.kind = FiberFunctor::Kind::forgetful;
  e.cat = cat;
  const int n = cat->sg.group.order;
  for (const auto& ir : cat->irreps) e.dims.push_back(ir.dim);
  e.group_images.resize(n);
  for (int g = 0; g < n; ++g)
    for (const auto& ir : cat->irreps) e.group_images[g].push_back(ir.matrices[g]);
  return e;
}

FiberFunctor auto_twisted(CatalogPtr cat, const std::vector<int>& beta,
                          const Tolerance& tol) {
  const auto& grp = cat->sg.group;
  const int n = grp.order;
  if ((int)beta.size() != n) fail("BadInput", "automorphism table has wrong size");
  std::vector<char> seen(n, 0);
  for (int v : beta) {
    if (v < 0 || v >= n || seen[v]) fail("BadInput", "automorphism is not a bijection");
    seen[v] = 1;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (beta[grp.op(a, b)] != grp.op(beta[a], beta[b]))
        fail("BadInput", "table is not a group automorphism");

  FiberFunctor e;
  e.kind = FiberFunctor::Kind::auto_twisted;
  e.cat = cat;
  e.beta = beta;
  auto table = irrep_chars(cat);
  const int nI = (int)cat->irreps.size();
  for (int i = 0; i < nI; ++i) {
    RepObject tw = rep_from_irrep(cat, i);
    Vec chi(n);
    for (int g = 0; g < n; ++g) {
      tw.matrices[g] = cat->irreps[i].matrices[beta[g]];
      chi(g) = tw.matrices[g].trace();
    }
    const int j = match_character(table, chi);
    e.irrep_perm.push_back(j);
    auto hb = hom_basis(tw, rep_from_irrep(cat, j), tol);
    if (hb.size() != 1) fail("IncompleteIrrepCatalog", "twisted irrep not identified");
    Mat v = fix_global_phase(hb[0].mat * std::sqrt(double(tw.dim)));
    if (!is_unitary(v, tol)) fail("AxiomViolation", "twist identification not unitary");
    e.twist_u.push_back(v);
    e.dims.push_back(cat->irreps[j].dim);
  }
  e.group_images.resize(n);
  for (int g = 0; g < n; ++g)
    for (int i = 0; i < nI; ++i)
      e.group_images[g].push_back(cat->irreps[e.irrep_perm[i]].matrices[g]);
  return e;
}

FiberFunctor metric_skewed(CatalogPtr cat, const std::vector<Mat>& metrics,
                           const Tolerance& tol) {
  const int nI = (int)cat->irreps.size();
  if ((int)metrics.size() != nI) fail("BadInput", "one metric per irrep expected");
  const int t0 = trivial_irrep_index(cat);
  for (int i = 0; i < nI; ++i) {
    const Mat& s = metrics[i];
    if (s.rows() != cat->irreps[i].dim || s.cols() != s.rows())
      fail("ShapeMismatch", "metric block has wrong shape");
    if (max_abs_diff(s, Mat(s.adjoint())) > tol.abs_eps * 100)
      fail("BadInput", "metric block is not hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(s);
    if (es.eigenvalues().minCoeff() <= tol.abs_eps)
      fail("BadInput", "metric block is not positive");
  }
  if (max_abs_diff(metrics[t0], ident(1)) > tol.abs_eps * 100)
    fail("BadInput", "trivial block must carry the standard product");

  FiberFunctor e = forgetful(cat);
  e.kind = FiberFunctor::Kind::metric_skewed;
  e.metric = metrics;
  return e;
}

FiberFunctor fiber_from_monoid(const MonoidObject& q, const Tolerance& tol) {
  const CatalogPtr cat = q.carrier.cat;
  const auto& grp = cat->sg.group;
  const int n = grp.order;
  if (q.carrier.dim != n) fail("BadInput", "carrier of regular size expected");
  if (!verify_monoid(q, true, tol).pass) fail("AxiomViolation", "monoid axioms fail");

  FiberFunctor e;
  e.kind = FiberFunctor::Kind::monoid_derived;
  e.cat = cat;
  e.monoid = q;
  e.unit_basis = q.eta.mat;
  e.unit_pinv = pseudo_inverse(e.unit_basis, tol, "MonoidNotAbsorbing");

  const int nI = (int)cat->irreps.size();
  const int t0 = trivial_irrep_index(cat);
  RepObject unit = unit_object(cat);
  for (int i = 0; i < nI; ++i) {
    const int d = cat->irreps[i].dim;
    auto hb = hom_basis(unit, tensor_obj(q.carrier, rep_from_irrep(cat, i)), tol);
    if ((int)hb.size() != d) fail("MonoidNotAbsorbing", "invariant multiplicity != dim");
    // basis orthonormal for the module inner product (1/n)<.,.>, which is the
    // product making the tensor coherences unitary; the trivial block carries
    // eta itself so the unit coherence has matrix 1
    Mat b(n * d, d);
    for (int a = 0; a < d; ++a) b.col(a) = std::sqrt(double(n)) * hb[a].mat.col(0);
    if (i == t0) b = q.eta.mat;
    e.inv_basis.push_back(b);
    e.inv_pinv.push_back(pseudo_inverse(b, tol, "MonoidNotAbsorbing"));
    e.dims.push_back(d);
  }

  // strictification bases for pair words: columns (m (x) id)(id (x) phi_a (x) id) psi_b
  e.pair_basis.assign(nI, std::vector<Mat>(nI));
  e.pair_pinv.assign(nI, std::vector<Mat>(nI));
  for (int i = 0; i < nI; ++i)
    for (int j = 0; j < nI; ++j) {
      const int di = e.dims[i], dj = e.dims[j];
      Mat N = Mat::Zero((long)n * di * dj, (long)di * dj);
      for (int a = 0; a < di; ++a)
        for (int b = 0; b < dj; ++b) {
          // R(p, x, y) = sum_{q1 q2} m(p, q1 n + q2) Bi(q1, x; a) Bj(q2, y; b)
          Mat Bi = reshape_rm(e.inv_basis[i].col(a), n, di);
          Mat Bj = reshape_rm(e.inv_basis[j].col(b), n, dj);
          for (int q1 = 0; q1 < n; ++q1) {
            Mat mb = q.m.mat.middleCols((long)q1 * n, n) * Bj;  // n x dj
            for (int p = 0; p < n; ++p)
              for (int x = 0; x < di; ++x)
                for (int y = 0; y < dj; ++y)
                  N((long)p * di * dj + (long)x * dj + y, (long)a * dj + b) +=
                      Bi(q1, x) * mb(p, y);
          }
        }
      e.pair_basis[i][j] = N;
      e.pair_pinv[i][j] = pseudo_inverse(N, tol, "MonoidNotAbsorbing");
    }

  // canonical candidates: right translations acting on the invariant bases
  e.group_images.resize(n);
  for (int g = 0; g < n; ++g) {
    Mat rho = Mat::Zero(n, n);
    for (int h = 0; h < n; ++h) rho(grp.op(h, grp.inv[g]), h) = 1.0;
    for (int i = 0; i < nI; ++i)
      e.group_images[g].push_back(e.inv_pinv[i] * kron(rho, ident(e.dims[i])) *
                                  e.inv_basis[i]);
  }
  return e;
}

long functor_dim(const FiberFunctor& e, const std::vector<int>& word) {
  long d = 1;
  for (int i : word) d *= e.dims.at(i);
  return d;
}

namespace {

long cat_dim(const FiberFunctor& e, const std::vector<int>& word) {
  long d = 1;
  for (int i : word) d *= e.cat->irreps.at(i).dim;
  return d;
}

Mat word_kron(const std::vector<Mat>& per_irrep, const std::vector<int>& word) {
  Mat out = ident(1);
  for (int i : word) out = kron(out, per_irrep[i]);
  return out;
}

const Mat& monoid_basis(const FiberFunctor& e, const std::vector<int>& word) {
  if (word.empty()) return e.unit_basis;
  if (word.size() == 1) return e.inv_basis[word[0]];
  return e.pair_basis[word[0]][word[1]];
}

Mat monoid_pinv(const FiberFunctor& e, const std::vector<int>& word) {
  if (word.empty()) return e.unit_pinv;
  if (word.size() == 1) return e.inv_pinv[word[0]];
  return e.pair_pinv[word[0]][word[1]];
}

}  // namespace

Mat functor_apply(const FiberFunctor& e, const std::vector<int>& dst_word,
                  const std::vector<int>& src_word, const Mat& s) {
  if (dst_word.size() > 2 || src_word.size() > 2)
    fail("BadInput", "words longer than two irreps are not strictified");
  if (s.rows() != cat_dim(e, dst_word) || s.cols() != cat_dim(e, src_word))
    fail("ShapeMismatch", "morphism shape does not match the words");

  switch (e.kind) {
    case FiberFunctor::Kind::forgetful:
      return s;
    case FiberFunctor::Kind::metric_skewed: {
      if (!e.tilde) return s;
      Mat sd = word_kron(e.metric, dst_word);
      Mat ss = word_kron(e.metric, src_word);
      return sd.inverse() * s * ss;
    }
    case FiberFunctor::Kind::auto_twisted: {
      Mat ud = word_kron(e.twist_u, dst_word);
      Mat us = word_kron(e.twist_u, src_word);
      return ud * s * us.adjoint();
    }
    case FiberFunctor::Kind::monoid_derived: {
      const int n = e.monoid.carrier.dim;
      return monoid_pinv(e, dst_word) * kron(ident(n), s) * monoid_basis(e, src_word);
    }
  }
  fail("BadInput", "unknown functor kind");
}

long AlgebraAE::index(int irrep, int row, int col) const {
  return off[irrep] + (long)row * d2[irrep] + col;
}

Vec AlgebraAE::embed(int irrep, const Mat& s) const {
  if (s.rows() != d1[irrep] || s.cols() != d2[irrep])
    fail("ShapeMismatch", "block has wrong shape");
  Vec out = Vec::Zero(dim);
  for (int a = 0; a < d1[irrep]; ++a)
    for (int b = 0; b < d2[irrep]; ++b) out(index(irrep, a, b)) = s(a, b);
  return out;
}

Mat AlgebraAE::block(const Vec& a, int irrep) const {
  Mat out(d1[irrep], d2[irrep]);
  for (int r = 0; r < d1[irrep]; ++r)
    for (int c = 0; c < d2[irrep]; ++c) out(r, c) = a(index(irrep, r, c));
  return out;
}

Vec AlgebraAE::mul(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(dim);
  for (long t = 0; t < dim; ++t)
    if (std::abs(a(t)) > 0) out += a(t) * (left[t] * b);
  return out;
}

Vec AlgebraAE::star(const Vec& a) const { return star_mat * a.conjugate(); }

AlgebraAE build_AE(const FiberFunctor& e1, const FiberFunctor& e2, const Tolerance& tol) {
  if (e1.cat.get() != e2.cat.get()) fail("GroupMismatch", "functors on different catalogs");
  const CatalogPtr cat = e1.cat;
  const int nI = (int)cat->irreps.size();

  AlgebraAE a;
  a.cat = cat;
  a.d1 = e1.dims;
  a.d2 = e2.dims;
  a.unit_block = trivial_irrep_index(cat);
  a.off.resize(nI);
  for (int i = 0; i < nI; ++i) {
    a.off[i] = a.dim;
    a.dim += (long)a.d1[i] * a.d2[i];
  }

  a.left.assign(a.dim, Mat::Zero(a.dim, a.dim));
  for (int i = 0; i < nI; ++i)
    for (int j = 0; j < nI; ++j) {
      RepObject t = tensor_obj(rep_from_irrep(cat, i), rep_from_irrep(cat, j));
      for (const auto& comp : irrep_decompose(t, tol)) {
        const int k = comp.irrep_index;
        for (const auto& w : comp.isometries) {
          Mat red1 = functor_apply(e1, {k}, {i, j}, w.mat.adjoint());
          Mat red2 = functor_apply(e2, {i, j}, {k}, w.mat);
          for (int p = 0; p < a.d1[i]; ++p)
            for (int q = 0; q < a.d2[i]; ++q)
              for (int r = 0; r < a.d1[j]; ++r)
                for (int c = 0; c < a.d2[j]; ++c) {
                  // product of basis blocks E_pq and E_rc lands in block k
                  Mat blk = red1.col((long)p * a.d1[j] + r) *
                            red2.row((long)q * a.d2[j] + c);
                  const long u = a.index(i, p, q), v = a.index(j, r, c);
                  for (int x = 0; x < a.d1[k]; ++x)
                    for (int y = 0; y < a.d2[k]; ++y)
                      a.left[u](a.index(k, x, y), v) += blk(x, y);
                }
        }
      }
    }

  a.unit = Vec::Zero(a.dim);
  a.unit(a.off[a.unit_block]) = 1.0;

  ConjPairing pairing = conj_pairing(cat, tol);
  a.star_mat = Mat::Zero(a.dim, a.dim);
  for (int i = 0; i < nI; ++i) {
    const int ib = pairing.partner[i];
    Mat ai = reshape_rm(functor_apply(e1, {ib, i}, {}, pairing.r[i]),
                        a.d1[ib], a.d1[i]);
    Mat bi = reshape_rm(functor_apply(e2, {}, {i, ib}, Mat(pairing.rbar[i].adjoint()))
                            .transpose(),
                        a.d2[i], a.d2[ib]);
    for (int p = 0; p < a.d1[i]; ++p)
      for (int q = 0; q < a.d2[i]; ++q) {
        Mat t = ai.col(p) * bi.row(q);
        for (int x = 0; x < a.d1[ib]; ++x)
          for (int y = 0; y < a.d2[ib]; ++y)
            a.star_mat(a.index(ib, x, y), a.index(i, p, q)) = t(x, y);
      }
  }
  return a;
}

std::vector<Character> characters(const AlgebraAE& a, const Tolerance& tol) {
  const long n = a.dim;
  for (long u = 0; u < n; ++u)
    for (long v = u + 1; v < n; ++v)
      if ((a.left[u].col(v) - a.left[v].col(u)).cwiseAbs().maxCoeff() > 1e-8)
        fail("NotCommutative", "hom-block algebra is not commutative");

  Rng rng(20240817);
  std::string why = "eigenvalue separation failed";
  for (int attempt = 0; attempt < 12; ++attempt) {
    Mat y = rng.matrix(n, 1);
    Mat l = Mat::Zero(n, n);
    for (long t = 0; t < n; ++t) l += y(t, 0) * a.left[t];
    Eigen::ComplexEigenSolver<Mat> es(l);
    if (es.info() != Eigen::Success) continue;
    const auto& ev = es.eigenvalues();
    double gap = 1e30;
    for (long i = 0; i < n; ++i)
      for (long j = i + 1; j < n; ++j) gap = std::min(gap, std::abs(ev(i) - ev(j)));
    if (gap < 1e-6) continue;
    Mat v = es.eigenvectors();
    Mat vinv = v.inverse();

    std::vector<Character> chars(n);
    for (long k = 0; k < n; ++k) chars[k].coeffs = Vec::Zero(n);
    for (long t = 0; t < n; ++t) {
      Mat d = vinv * a.left[t] * v;
      for (long k = 0; k < n; ++k) chars[k].coeffs(t) = d(k, k);
    }

    double resid = 0;
    for (const auto& ch : chars) {
      resid = std::max(resid, std::abs(ch.eval(a.unit) - Complex(1, 0)));
      for (long u = 0; u < n && resid < 1e-7; ++u) {
        Complex fu = ch.coeffs(u);
        Vec prods = a.left[u].transpose() * ch.coeffs;  // phi(e_u e_v) over v
        resid = std::max(resid, (prods - fu * ch.coeffs).cwiseAbs().maxCoeff());
      }
    }
    if (resid > 1e-7) {
      why = "diagonalization not multiplicative";
      continue;
    }

    for (auto& ch : chars) {
      double sresid = 0;
      for (long t = 0; t < n; ++t)
        sresid = std::max(sresid,
                          std::abs(ch.eval(a.star_mat.col(t)) - std::conj(ch.coeffs(t))));
      ch.star = sresid <= 1e-7;
    }
    std::sort(chars.begin(), chars.end(), [](const Character& x, const Character& y) {
      for (long t = 0; t < x.coeffs.size(); ++t) {
        double xr = std::round(x.coeffs(t).real() * 1e6), yr = std::round(y.coeffs(t).real() * 1e6);
        if (xr != yr) return xr < yr;
        double xi = std::round(x.coeffs(t).imag() * 1e6), yi = std::round(y.coeffs(t).imag() * 1e6);
        if (xi != yi) return xi < yi;
      }
      return false;
    });
    return chars;
  }
  fail("BadInput", why);
}

double gelfand_norm(const std::vector<Character>& chars, const Vec& x) {
  double out = 0;
  for (const auto& ch : chars) out = std::max(out, std::abs(ch.eval(x)));
  return out;
}

double rep_norm(const AlgebraAE& a, const Vec& x) {
  double out = 0;
  for (int i = 0; i < (int)a.d1.size(); ++i) out = std::max(out, op_norm(a.block(x, i)));
  return out;
}

NatTrans char_to_nat(const AlgebraAE& a, const Character& phi) {
  NatTrans alpha;
  for (int i = 0; i < (int)a.d1.size(); ++i) {
    Mat c(a.d2[i], a.d1[i]);
    for (int b = 0; b < a.d2[i]; ++b)
      for (int p = 0; p < a.d1[i]; ++p) c(b, p) = phi.coeffs(a.index(i, p, b));
    alpha.family.push_back(c);
  }
  return alpha;
}

double unitarity_residual(const NatTrans& alpha) {
  double out = 0;
  for (const auto& c : alpha.family) {
    out = std::max(out, max_abs_diff(Mat(c.adjoint() * c), ident(c.cols())));
    out = std::max(out, max_abs_diff(Mat(c * c.adjoint()), ident(c.rows())));
  }
  return out;
}

double monoidality_residual(const FiberFunctor& e1, const FiberFunctor& e2,
                            const NatTrans& alpha, const Tolerance& tol) {
  const CatalogPtr cat = e1.cat;
  const int nI = (int)cat->irreps.size();
  const int t0 = trivial_irrep_index(cat);
  double out = std::abs(alpha.family[t0](0, 0) - Complex(1, 0));
  for (int i = 0; i < nI; ++i)
    for (int j = 0; j < nI; ++j) {
      RepObject t = tensor_obj(rep_from_irrep(cat, i), rep_from_irrep(cat, j));
      Mat lhs = Mat::Zero(functor_dim(e2, {i, j}), functor_dim(e1, {i, j}));
      for (const auto& comp : irrep_decompose(t, tol)) {
        const int k = comp.irrep_index;
        for (const auto& w : comp.isometries)
          lhs += functor_apply(e2, {i, j}, {k}, w.mat) * alpha.family[k] *
                 functor_apply(e1, {k}, {i, j}, w.mat.adjoint());
      }
      out = std::max(out, max_abs_diff(lhs, kron(alpha.family[i], alpha.family[j])));
    }
  return out;
}

double nat_distance(const NatTrans& a, const NatTrans& b) {
  double out = 0;
  for (size_t i = 0; i < a.family.size(); ++i)
    out = std::max(out, max_abs_diff(a.family[i], b.family[i]));
  return out;
}

namespace {

int find_element(const std::vector<NatTrans>& elems, const NatTrans& x, double cut) {
  for (int i = 0; i < (int)elems.size(); ++i)
    if (nat_distance(elems[i], x) < cut) return i;
  return -1;
}

}  // namespace

ReconstructionResult reconstruct_group(const FiberFunctor& e, const Tolerance& tol) {
  check_group_candidates(e);
  AlgebraAE a = build_AE(e, e, tol);
  auto chars = characters(a, tol);

  ReconstructionResult out;
  for (const auto& ch : chars) {
    if (!ch.star) continue;
    NatTrans alpha = char_to_nat(a, ch);
    if (unitarity_residual(alpha) > 1e-6) continue;
    if (monoidality_residual(e, e, alpha, tol) > 1e-6) continue;
    out.elements.push_back(std::move(alpha));
  }
  const int m = (int)out.elements.size();
  const int n = e.cat->sg.group.order;
  if (m != n) fail("ReconstructionMismatch", "symmetry count differs from group order");

  out.table.assign(m, std::vector<int>(m, -1));
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      NatTrans prod;
      for (size_t i = 0; i < out.elements[p].family.size(); ++i)
        prod.family.push_back(out.elements[p].family[i] * out.elements[q].family[i]);
      out.table[p][q] = find_element(out.elements, prod, 1e-6);
      if (out.table[p][q] < 0) fail("ReconstructionMismatch", "composition leaves the set");
    }

  out.bijection.assign(n, -1);
  std::vector<char> used(m, 0);
  for (int g = 0; g < n; ++g) {
    NatTrans cand{e.group_images[g]};
    const int idx = find_element(out.elements, cand, 1e-6);
    if (idx < 0 || used[idx]) fail("ReconstructionMismatch", "group element unmatched");
    used[idx] = 1;
    out.bijection[g] = idx;
    out.residual = std::max(out.residual, nat_distance(cand, out.elements[idx]));
  }

  out.iso_ok = true;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (out.table[out.bijection[g]][out.bijection[h]] !=
          out.bijection[e.cat->sg.group.op(g, h)])
        out.iso_ok = false;
  return out;
}

NatTrans unitary_monoidal_iso(const FiberFunctor& e1, const FiberFunctor& e2,
                              const Tolerance& tol) {
  AlgebraAE a = build_AE(e1, e2, tol);
  auto chars = characters(a, tol);
  for (const auto& ch : chars) {
    if (!ch.star) continue;
    NatTrans alpha = char_to_nat(a, ch);
    if (unitarity_residual(alpha) > 1e-6) continue;
    if (monoidality_residual(e1, e2, alpha, tol) > 1e-6) continue;
    return alpha;
  }
  fail("NoStarCharacter", "no unitary monoidal isomorphism found");
}

StarRepair make_star_preserving(const FiberFunctor& e, const Tolerance& tol) {
  FiberFunctor base = e;
  if (base.kind == FiberFunctor::Kind::forgetful) {
    std::vector<Mat> id_metrics;
    for (int d : base.dims) id_metrics.push_back(ident(d));
    base = metric_skewed(base.cat, id_metrics, tol);
  }
  if (base.kind != FiberFunctor::Kind::metric_skewed || base.tilde)
    fail("BadInput", "inner-product repair expects a metric functor");

  FiberFunctor twin = base;
  twin.tilde = true;
  AlgebraAE a = build_AE(base, twin, tol);
  auto chars = characters(a, tol);

  StarRepair out;
  for (int k = 0; k < (int)chars.size(); ++k) {
    NatTrans alpha = char_to_nat(a, chars[k]);
    bool ok = true;
    double mineig = 1e30;
    std::vector<Mat> metric;
    for (size_t i = 0; i < alpha.family.size(); ++i) {
      Mat t = base.metric[i] * alpha.family[i];
      if (max_abs_diff(t, Mat(t.adjoint())) > 1e-7) {
        ok = false;
        break;
      }
      t = 0.5 * (t + Mat(t.adjoint()));
      Eigen::SelfAdjointEigenSolver<Mat> es(t);
      mineig = std::min(mineig, es.eigenvalues().minCoeff());
      metric.push_back(t);
    }
    if (!ok || mineig <= tol.abs_eps) continue;
    if (monoidality_residual(base, twin, alpha, tol) > 1e-6) continue;
    out.character_index = k;
    out.alpha = alpha.family;
    out.new_metric = metric;
    out.min_eig = mineig;
    break;
  }
  if (out.character_index < 0) fail("NoPositiveCharacter", "no positive character exists");

  const CatalogPtr cat = base.cat;
  const int nI = (int)cat->irreps.size();
  const auto& grp = cat->sg.group;
  for (int i = 0; i < nI; ++i) {
    const Mat& t = out.new_metric[i];
    for (int g = 0; g < grp.order; ++g) {
      const Mat& pg = cat->irreps[i].matrices[g];
      out.unitary_residual =
          std::max(out.unitary_residual, max_abs_diff(Mat(pg.adjoint() * t * pg), t));
    }
  }
  for (int i = 0; i < nI; ++i)
    for (int j = 0; j < nI; ++j) {
      RepObject t = tensor_obj(rep_from_irrep(cat, i), rep_from_irrep(cat, j));
      Mat tij = kron(out.new_metric[i], out.new_metric[j]);
      for (const auto& comp : irrep_decompose(t, tol)) {
        const Mat& tk = out.new_metric[comp.irrep_index];
        for (const auto& w : comp.isometries)
          out.adjoint_residual = std::max(
              out.adjoint_residual,
              max_abs_diff(Mat(tk.inverse() * w.mat.adjoint() * tij), Mat(w.mat.adjoint())));
      }
    }
  out.pass = out.min_eig > tol.abs_eps && out.adjoint_residual < 1e-6 &&
             out.unitary_residual < 1e-6;
  return out;
}

MonoidAutoResult monoid_automorphisms(const MonoidObject& q, const Tolerance& tol) {
  const CatalogPtr cat = q.carrier.cat;
  const int n = q.carrier.dim;
  const auto& grp = cat->sg.group;
  if (n != grp.order) fail("BadInput", "carrier of regular size expected");

  // primitive idempotents of (Q, m) by simultaneous diagonalization
  std::vector<Mat> lmul(n);
  for (int v = 0; v < n; ++v) {
    lmul[v] = Mat::Zero(n, n);
    for (int w = 0; w < n; ++w) lmul[v].col(w) = q.m.mat.col((long)v * n + w);
  }
  Rng rng(424242);
  std::vector<Vec> idem;
  for (int attempt = 0; attempt < 12 && idem.empty(); ++attempt) {
    Mat y = rng.matrix(n, 1);
    Mat l = Mat::Zero(n, n);
    for (int v = 0; v < n; ++v) l += y(v, 0) * lmul[v];
    Eigen::ComplexEigenSolver<Mat> es(l);
    if (es.info() != Eigen::Success) continue;
    const auto& ev = es.eigenvalues();
    double gap = 1e30;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) gap = std::min(gap, std::abs(ev(i) - ev(j)));
    if (gap < 1e-6) continue;
    for (int k = 0; k < n; ++k) {
      Vec v = es.eigenvectors().col(k);
      Mat lv = Mat::Zero(n, n);
      for (int t = 0; t < n; ++t) lv += v(t) * lmul[t];
      Vec vv = lv * v;  // m(v (x) v) = c v for eigenvector of the regular action
      long pivot;
      v.cwiseAbs().maxCoeff(&pivot);
      Complex c = vv(pivot) / v(pivot);
      if (std::abs(c) < 1e-9) fail("BadInput", "degenerate idempotent scaling");
      idem.push_back(v / c);
    }
  }
  if (idem.empty()) fail("BadInput", "idempotent search failed");

  // carrier action permutes the idempotents; record that permutation
  auto idem_index = [&](const Vec& x) {
    for (int k = 0; k < n; ++k)
      if ((idem[k] - x).cwiseAbs().maxCoeff() < 1e-6) return k;
    return -1;
  };
  std::vector<std::vector<int>> act(grp.order, std::vector<int>(n, -1));
  for (int h = 0; h < grp.order; ++h)
    for (int k = 0; k < n; ++k) {
      act[h][k] = idem_index(q.carrier.at(h) * idem[k]);
      if (act[h][k] < 0) fail("BadInput", "carrier action does not permute idempotents");
    }

  // commutant of the action: sigma is fixed by its value at one base point
  // travelled along the (transitive) orbit
  MonoidAutoResult out;
  for (int target = 0; target < n; ++target) {
    std::vector<int> sigma(n, -1);
    bool ok = true;
    sigma[0] = target;
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    std::vector<int> queue{0};
    while (!queue.empty() && ok) {
      int k = queue.back();
      queue.pop_back();
      for (int h = 0; h < grp.order; ++h) {
        int kk = act[h][k], im = act[h][sigma[k]];
        if (sigma[kk] < 0) {
          sigma[kk] = im;
          if (!seen[kk]) {
            seen[kk] = 1;
            queue.push_back(kk);
          }
        } else if (sigma[kk] != im) {
          ok = false;
          break;
        }
      }
    }
    for (int k = 0; k < n; ++k)
      if (sigma[k] < 0) ok = false;
    if (!ok) continue;

    // assemble the linear map sending idem[k] to idem[sigma[k]]
    Mat p(n, n), pi(n, n);
    for (int k = 0; k < n; ++k) {
      p.col(k) = idem[k];
      pi.col(k) = idem[sigma[k]];
    }
    Mat g = pi * p.inverse();

    double resid = 0;
    for (int h = 0; h < grp.order; ++h)
      resid = std::max(resid, max_abs_diff(Mat(g * q.carrier.at(h)), Mat(q.carrier.at(h) * g)));
    resid = std::max(resid, max_abs_diff(Mat(g * q.eta.mat), q.eta.mat));
    Mat gm = g * q.m.mat;
    Mat mg = q.m.mat * kron(g, g);
    resid = std::max(resid, max_abs_diff(gm, mg));
    if (resid > 1e-7) continue;
    bool dup = false;
    for (const auto& prev : out.autos)
      if (max_abs_diff(prev, g) < 1e-6) dup = true;
    if (!dup) out.autos.push_back(g);
  }
  if (out.autos.empty()) fail("BadInput", "no automorphisms found");

  const int m = (int)out.autos.size();
  out.table.assign(m, std::vector<int>(m, -1));
  for (int p = 0; p < m; ++p)
    for (int r = 0; r < m; ++r) {
      Mat prod = out.autos[p] * out.autos[r];
      for (int s = 0; s < m; ++s)
        if (max_abs_diff(prod, out.autos[s]) < 1e-6) out.table[p][r] = s;
      if (out.table[p][r] < 0) fail("ComparisonMismatch", "automorphisms not closed");
    }

  // compare with the reconstructed symmetry group of the derived functor
  FiberFunctor e = fiber_from_monoid(q, tol);
  ReconstructionResult rec = reconstruct_group(e, tol);
  if ((int)rec.elements.size() != m)
    fail("ComparisonMismatch", "automorphism count differs from reconstruction");
  const int nI = (int)cat->irreps.size();
  out.match.assign(m, -1);
  std::vector<char> used(m, 0);
  for (int p = 0; p < m; ++p) {
    NatTrans induced;
    for (int i = 0; i < nI; ++i)
      induced.family.push_back(e.inv_pinv[i] * kron(out.autos[p], ident(e.dims[i])) *
                               e.inv_basis[i]);
    int idx = find_element(rec.elements, induced, 1e-6);
    if (idx < 0 || used[idx]) fail("ComparisonMismatch", "automorphism unmatched");
    used[idx] = 1;
    out.match[p] = idx;
    out.residual = std::max(out.residual, nat_distance(induced, rec.elements[idx]));
  }
  out.comparison_ok = true;
  for (int p = 0; p < m; ++p)
    for (int r = 0; r < m; ++r)
      if (rec.table[out.match[p]][out.match[r]] != out.match[out.table[p][r]])
        out.comparison_ok = false;
  if (!out.comparison_ok) fail("ComparisonMismatch", "tables are not isomorphic");
  return out;
}

namespace {

SpanReport span_rank(const std::vector<Mat>& rows, int expected, const Tolerance& tol) {
  Mat stack(rows.size(), rows[0].size());
  for (size_t g = 0; g < rows.size(); ++g) {
    long p = 0;
    for (long r = 0; r < rows[g].rows(); ++r)
      for (long c = 0; c < rows[g].cols(); ++c) stack(g, p++) = rows[g](r, c);
  }
  Eigen::JacobiSVD<Mat> svd(stack);
  const auto& s = svd.singularValues();
  SpanReport out;
  out.expected = expected;
  const double cut = std::max(tol.abs_eps * 100, s(0) * 1e-9);
  for (long i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++out.rank;
  out.pass = out.rank == expected;
  return out;
}

}  // namespace

SpanReport dense_span_check(const FiberFunctor& e, int irrep_index, const Tolerance& tol) {
  check_group_candidates(e);
  std::vector<Mat> rows;
  for (const auto& per_g : e.group_images) rows.push_back(per_g[irrep_index]);
  const int d = e.dims[irrep_index];
  return span_rank(rows, d * d, tol);
}

SpanReport dense_span_pair_check(const FiberFunctor& e, int i, int j, const Tolerance& tol) {
  check_group_candidates(e);
  std::vector<Mat> rows;
  for (const auto& per_g : e.group_images) {
    Mat joint = Mat::Zero(1, (long)e.dims[i] * e.dims[i] + (long)e.dims[j] * e.dims[j]);
    long p = 0;
    for (long r = 0; r < per_g[i].rows(); ++r)
      for (long c = 0; c < per_g[i].cols(); ++c) joint(0, p++) = per_g[i](r, c);
    for (long r = 0; r < per_g[j].rows(); ++r)
      for (long c = 0; c < per_g[j].cols(); ++c) joint(0, p++) = per_g[j](r, c);
    rows.push_back(joint);
  }
  const int expected = i == j ? e.dims[i] * e.dims[i]
                              : e.dims[i] * e.dims[i] + e.dims[j] * e.dims[j];
  return span_rank(rows, expected, tol);
}

}  // namespace stc
