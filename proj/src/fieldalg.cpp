#include "stc/fieldalg.hpp"

#include <algorithm>
#include <cmath>

namespace stc {

namespace {

Complex hs(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace(); }

Mat site_op(int n_sites, long d, int site, const Mat& m) {
  Mat out = ident(1);
  for (int j = 0; j < n_sites; ++j)
    out = kron(out, j == site ? m : Mat(ident(d)));
  return out;
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

std::vector<int> check_region(const LatticeFieldSystem& sys, std::vector<int> region) {
  std::sort(region.begin(), region.end());
  if (std::adjacent_find(region.begin(), region.end()) != region.end())
    fail("BadInput", "region lists a site twice");
  for (int s : region)
    if (s < 0 || s >= sys.n_sites) fail("BadInput", "region site out of range");
  return region;
}

std::vector<int> complement_region(const LatticeFieldSystem& sys,
                                   const std::vector<int>& region) {
  std::vector<int> out;
  for (int s = 0; s < sys.n_sites; ++s)
    if (std::find(region.begin(), region.end(), s) == region.end()) out.push_back(s);
  return out;
}

// projection residual of v against an orthonormal column family q
double span_residual(const Mat& q, const Vec& v) {
  Vec r = v - q * (q.adjoint() * v);
  double n = v.norm();
  return r.norm() / std::max(1.0, n);
}

Vec vec_of(const Mat& m) {
  Vec v(m.size());
  long t = 0;
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) v(t++) = m(r, c);
  return v;
}

Mat mat_of(const Vec& v, long rows, long cols) {
  Mat m(rows, cols);
  long t = 0;
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) m(r, c) = v(t++);
  return m;
}

Mat stack_vecs(const std::vector<Mat>& mats) {
  Mat q(mats.empty() ? 0 : mats[0].size(), (long)mats.size());
  for (std::size_t j = 0; j < mats.size(); ++j) q.col((long)j) = vec_of(mats[j]);
  return q;
}

// isotypic multiplicities of the gauge action restricted to region sites
std::vector<long> region_multiplicities(const LatticeFieldSystem& sys, long n_region) {
  const FiniteGroup& grp = sys.gauge->sg.group;
  std::vector<long> mult;
  for (const auto& ir : sys.gauge->irreps) {
    Complex acc = 0;
    for (int g = 0; g < grp.order; ++g) {
      Complex site_tr = sys.site_u[g].trace();
      Complex power = 1;
      for (long t = 0; t < n_region; ++t) power *= site_tr;
      acc += std::conj(ir.matrices[g].trace()) * power;
    }
    double m = (acc / (double)grp.order).real();
    mult.push_back(std::lround(m));
  }
  return mult;
}

FieldElement make_zero(const FieldAlgebra& fa) {
  FieldElement x;
  x.coef.resize(fa.endos.size());
  for (std::size_t k = 0; k < fa.endos.size(); ++k)
    x.coef[k].assign(fa.endos[k].edim, Mat::Zero(fa.sys.dim, fa.sys.dim));
  return x;
}

double obs_span_residual(const FieldAlgebra& fa, const Mat& x) {
  Mat q = stack_vecs(fa.a.basis);
  return span_residual(q, vec_of(x));
}

}  // namespace

std::vector<int> LatticeFieldSystem::all_sites() const {
  std::vector<int> out(n_sites);
  for (int s = 0; s < n_sites; ++s) out[s] = s;
  return out;
}

LatticeFieldSystem build_lattice(int n_sites, long site_dim, CatalogPtr gauge,
                                 const std::vector<Mat>& site_rep, Statistics st,
                                 const Tolerance& tol) {
  if (n_sites < 1 || site_dim < 1) fail("BadInput", "lattice needs sites and a site dim");
  double total = std::pow((double)site_dim, n_sites);
  if (total > 4096.5) fail("BadInput", "carrier dimension too large for desk scale");
  const FiniteGroup& grp = gauge->sg.group;
  if ((int)site_rep.size() != grp.order)
    fail("BadGaugeRep", "one site unitary per group element expected");
  for (int g = 0; g < grp.order; ++g) {
    if (site_rep[g].rows() != site_dim || site_rep[g].cols() != site_dim)
      fail("BadGaugeRep", "site unitary has wrong shape");
    if (!is_unitary(site_rep[g], tol)) fail("BadGaugeRep", "site rep is not unitary");
    for (int h = 0; h < grp.order; ++h)
      if (max_abs_diff(Mat(site_rep[g] * site_rep[h]), site_rep[grp.op(g, h)]) >
          1e-9)
        fail("BadGaugeRep", "site rep is not a homomorphism");
  }
  LatticeFieldSystem sys;
  sys.n_sites = n_sites;
  sys.site_dim = site_dim;
  sys.statistics = st;
  sys.gauge = std::move(gauge);
  sys.site_u = site_rep;
  sys.dim = (long)std::llround(total);
  for (int g = 0; g < grp.order; ++g) {
    Mat u = ident(1);
    for (int s = 0; s < n_sites; ++s) u = kron(u, site_rep[g]);
    sys.global_u.push_back(std::move(u));
  }
  if (st == Statistics::fermionic) {
    if (site_dim != 2) fail("BadGaugeRep", "fermionic chains use two-dimensional sites");
    if (!sys.gauge->sg.has_k()) fail("BadGaugeRep", "fermionic gauge group declares no k");
    if (max_abs_diff(sys.site_u[sys.gauge->sg.k], pauli_z()) > 1e-9)
      fail("BadGaugeRep", "fermionic gauge k must act as the site parity");
    for (int j = 0; j < n_sites; ++j) {
      Mat even = ident(1), x = pauli_x(), y = pauli_y(), z = pauli_z();
      Mat string = ident(1);
      for (int l = 0; l < j; ++l) string = kron(string, z);
      Mat tail = ident((long)std::llround(std::pow(2.0, n_sites - 1 - j)));
      sys.majorana.push_back(kron(kron(string, x), tail));
      sys.majorana.push_back(kron(kron(string, y), tail));
    }
  }
  return sys;
}

LatticeFieldSystem z2_qubit_chain(int n_sites) {
  auto cat = builtin("Z2k");
  return build_lattice(n_sites, 2, cat, {ident(2), pauli_z()}, Statistics::bosonic);
}

LatticeFieldSystem fermion_chain(int n_sites) {
  auto cat = builtin("Z2k");
  return build_lattice(n_sites, 2, cat, {ident(2), pauli_z()}, Statistics::fermionic);
}

LatticeFieldSystem s3_chain(int n_sites) {
  auto cat = builtin("S3");
  std::vector<Mat> u;
  for (int g = 0; g < cat->sg.group.order; ++g) {
    Mat m = Mat::Zero(3, 3);
    m(0, 0) = 1;
    m.block(1, 1, 2, 2) = cat->irreps[2].matrices[g];
    u.push_back(m);
  }
  return build_lattice(n_sites, 3, cat, u, Statistics::bosonic);
}

Mat grading(const LatticeFieldSystem& sys) {
  if (!sys.gauge->sg.has_k()) return ident(sys.dim);
  return sys.global_u[sys.gauge->sg.k];
}

std::vector<Mat> field_basis(const LatticeFieldSystem& sys,
                             const std::vector<int>& region_in) {
  std::vector<int> region = check_region(sys, region_in);
  const long d = sys.site_dim;
  std::vector<Mat> out;
  if (sys.statistics == Statistics::bosonic) {
    long per = d * d;
    long count = 1;
    for (std::size_t i = 0; i < region.size(); ++i) count *= per;
    double scale =
        1.0 / std::sqrt(std::pow((double)d, sys.n_sites - (int)region.size()));
    for (long idx = 0; idx < count; ++idx) {
      long rest = idx;
      Mat op = ident(1);
      std::size_t pos = 0;
      for (int s = 0; s < sys.n_sites; ++s) {
        if (pos < region.size() && region[pos] == s) {
          long unit = rest % per;
          rest /= per;
          Mat e = Mat::Zero(d, d);
          e(unit / d, unit % d) = 1.0;
          op = kron(op, e);
          ++pos;
        } else {
          op = kron(op, Mat(ident(d)));
        }
      }
      out.push_back(scale * op);
    }
  } else {
    std::vector<int> modes;
    for (int s : region) {
      modes.push_back(2 * s);
      modes.push_back(2 * s + 1);
    }
    double scale = 1.0 / std::sqrt((double)sys.dim);
    for (long mask = 0; mask < (1L << modes.size()); ++mask) {
      Mat op = ident(sys.dim);
      for (std::size_t b = 0; b < modes.size(); ++b)
        if (mask & (1L << b)) op = op * sys.majorana[modes[b]];
      out.push_back(scale * op);
    }
  }
  return out;
}

MatrixStarAlgebra observables(const LatticeFieldSystem& sys,
                              const std::vector<int>& region,
                              const Tolerance& tol) {
  std::vector<Mat> fb = field_basis(sys, region);
  const long n = (long)fb.size();
  const FiniteGroup& grp = sys.gauge->sg.group;
  Mat p(n, n);
  for (long j = 0; j < n; ++j) {
    Mat avg = haar_average(grp, [&](int g) {
      return Mat(sys.global_u[g] * fb[j] * sys.global_u[g].adjoint());
    });
    for (long i = 0; i < n; ++i) p(i, j) = hs(fb[i], avg);
  }
  Mat r = orthonormal_range(p, tol);
  MatrixStarAlgebra out;
  out.ambient = sys.dim;
  for (long c = 0; c < r.cols(); ++c) {
    Mat m = Mat::Zero(sys.dim, sys.dim);
    for (long i = 0; i < n; ++i) m += r(i, c) * fb[i];
    out.basis.push_back(std::move(m));
  }
  std::vector<long> mult =
      region_multiplicities(sys, (long)check_region(sys, region).size());
  long total = 0;
  for (long m : mult) {
    if (m > 0) out.blocks.push_back(m);
    total += m * m;
  }
  if (total != (long)out.basis.size())
    fail("AxiomViolation", "invariant dimension disagrees with the block count");
  return out;
}

std::vector<Mat> commutant(const std::vector<Mat>& basis, long ambient,
                           const Tolerance& tol) {
  for (const auto& a : basis)
    if (a.rows() != ambient || a.cols() != ambient)
      fail("ShapeMismatch", "basis matrix has wrong shape");
  const long nn = ambient * ambient;
  Mat l(nn * (long)basis.size(), nn);
  Mat id = ident(ambient);
  for (std::size_t t = 0; t < basis.size(); ++t) {
    // row-major vec: vec(X A) = (I (x) A^T) vec X, vec(A X) = (A (x) I) vec X
    l.block((long)t * nn, 0, nn, nn) =
        kron(id, basis[t].transpose()) - kron(basis[t], id);
  }
  Mat ns = nullspace(l, tol);
  std::vector<Mat> out;
  for (long c = 0; c < ns.cols(); ++c) out.push_back(mat_of(ns.col(c), ambient, ambient));
  return out;
}

CommutantReport verify_commutant_theorem(const LatticeFieldSystem& sys,
                                         const Tolerance& tol) {
  MatrixStarAlgebra a = observables(sys, sys.all_sites(), tol);
  std::vector<Mat> c = commutant(a.basis, sys.dim, tol);
  CommutantReport rep;
  rep.dim_observables = (long)a.basis.size();
  rep.dim_commutant = (long)c.size();
  Mat qc = orthonormal_span(stack_vecs(c), tol);
  Mat qg = orthonormal_span(stack_vecs(sys.global_u), tol);
  for (const auto& u : sys.global_u)
    rep.group_to_commutant = std::max(rep.group_to_commutant, span_residual(qc, vec_of(u)));
  for (const auto& x : c)
    rep.commutant_to_group = std::max(rep.commutant_to_group, span_residual(qg, vec_of(x)));
  std::vector<Mat> cc = commutant(c, sys.dim, tol);
  Mat qa = orthonormal_span(stack_vecs(a.basis), tol);
  Mat qcc = orthonormal_span(stack_vecs(cc), tol);
  double d1 = 0, d2 = 0;
  for (const auto& x : cc) d1 = std::max(d1, span_residual(qa, vec_of(x)));
  for (const auto& x : a.basis) d2 = std::max(d2, span_residual(qcc, vec_of(x)));
  rep.double_commutant = std::max(d1, d2);
  rep.pass = rep.group_to_commutant < tol.abs_eps * 10 &&
             rep.commutant_to_group < tol.abs_eps * 10 &&
             rep.double_commutant < tol.abs_eps * 10;
  return rep;
}

Mat isotypic_projector(const LatticeFieldSystem& sys, int sigma, const Tolerance&) {
  if (sigma < 0 || sigma >= (int)sys.gauge->irreps.size())
    fail("IncompleteIrrepCatalog", "sector index outside the irrep list");
  const FiniteGroup& grp = sys.gauge->sg.group;
  const Irrep& ir = sys.gauge->irreps[sigma];
  Mat e = Mat::Zero(sys.dim, sys.dim);
  for (int g = 0; g < grp.order; ++g)
    e += std::conj(ir.matrices[g].trace()) * sys.global_u[g];
  return Mat(e * ((double)ir.dim / grp.order));
}

SectorDecomposition sector_decompose(const LatticeFieldSystem& sys,
                                     const Tolerance& tol) {
  SectorDecomposition out;
  Mat sum = Mat::Zero(sys.dim, sys.dim);
  for (int s = 0; s < (int)sys.gauge->irreps.size(); ++s) {
    Mat e = isotypic_projector(sys, s, tol);
    long rank = std::lround(e.trace().real());
    out.projectors.push_back(e);
    out.ranks.push_back(rank);
    if (rank > 0) out.sectors.push_back(s);
    sum += e;
  }
  out.completeness = max_abs_diff(sum, ident(sys.dim));
  for (std::size_t i = 0; i < out.projectors.size(); ++i)
    for (std::size_t j = 0; j < out.projectors.size(); ++j) {
      Mat prod = out.projectors[i] * out.projectors[j];
      Mat want = i == j ? out.projectors[i] : Mat(Mat::Zero(sys.dim, sys.dim));
      out.orthogonality = std::max(out.orthogonality, max_abs_diff(prod, want));
    }
  MatrixStarAlgebra a = observables(sys, sys.all_sites(), tol);
  for (const auto& e : out.projectors)
    for (const auto& b : a.basis)
      out.commutation = std::max(out.commutation, max_abs_diff(Mat(e * b), Mat(b * e)));
  return out;
}

Mat multiplet_average(const LatticeFieldSystem& sys, const Vec& phi, const Vec& psi,
                      const Mat& f) {
  const FiniteGroup& grp = sys.gauge->sg.group;
  return haar_average(grp, [&](int g) {
    Complex w = (phi.adjoint() * sys.global_u[g] * psi)(0, 0);
    return Mat(w * sys.global_u[g] * f * sys.global_u[g].adjoint());
  });
}

Multiplet find_multiplet(const LatticeFieldSystem& sys, const std::vector<int>& region,
                         int xi, const Tolerance& tol) {
  if (xi < 0 || xi >= (int)sys.gauge->irreps.size())
    fail("IncompleteIrrepCatalog", "sector index outside the irrep list");
  std::vector<Mat> fb = field_basis(sys, region);
  const long n = (long)fb.size();
  const FiniteGroup& grp = sys.gauge->sg.group;
  RepObject ad;
  ad.cat = sys.gauge;
  ad.dim = (int)n;
  for (int g = 0; g < grp.order; ++g) {
    Mat r(n, n);
    for (long j = 0; j < n; ++j) {
      Mat moved = sys.global_u[g] * fb[j] * sys.global_u[g].adjoint();
      for (long i = 0; i < n; ++i) r(i, j) = hs(fb[i], moved);
    }
    ad.matrices.push_back(std::move(r));
  }
  const Irrep& ir = sys.gauge->irreps[xi];
  Complex count = 0;
  for (int g = 0; g < grp.order; ++g)
    count += std::conj(ir.matrices[g].trace()) * ad.matrices[g].trace();
  if (std::lround((count / (double)grp.order).real()) < 1)
    fail("SectorAbsent", "sector does not occur in the region fields");
  auto comps = irrep_decompose(ad, tol);
  Multiplet out;
  out.irrep = xi;
  const Mat* w = nullptr;
  for (const auto& c : comps)
    if (c.irrep_index == xi) {
      w = &c.isometries[0].mat;
      break;
    }
  if (w == nullptr) fail("SectorAbsent", "sector does not occur in the region fields");
  for (long i = 0; i < ir.dim; ++i) {
    Mat f = Mat::Zero(sys.dim, sys.dim);
    for (long c = 0; c < n; ++c) f += (*w)(c, i) * fb[c];
    out.ops.push_back(std::move(f));
  }
  for (int g = 0; g < grp.order; ++g)
    for (long i = 0; i < ir.dim; ++i) {
      Mat moved = sys.global_u[g] * out.ops[i] * sys.global_u[g].adjoint();
      Mat want = Mat::Zero(sys.dim, sys.dim);
      for (long j = 0; j < ir.dim; ++j) want += ir.matrices[g](j, i) * out.ops[j];
      out.covariance = std::max(out.covariance, max_abs_diff(moved, want));
    }
  Mat s = Mat::Zero(sys.dim, sys.dim);
  for (const auto& f : out.ops) s += f.adjoint() * f;
  for (long i = 0; i < ir.dim; ++i)
    for (long j = 0; j < ir.dim; ++j) {
      Mat avg = haar_average(grp, [&](int g) {
        return Mat(sys.global_u[g] * out.ops[i].adjoint() * out.ops[j] *
                   sys.global_u[g].adjoint());
      });
      Mat want = i == j ? Mat(s / (double)ir.dim) : Mat(Mat::Zero(sys.dim, sys.dim));
      out.orthogonality = std::max(out.orthogonality, max_abs_diff(avg, want));
    }
  return out;
}

std::vector<Mat> polar_multiplet(const Multiplet& m, const Tolerance& tol) {
  if (m.ops.empty()) fail("BadInput", "empty multiplet");
  const long d = m.ops[0].rows();
  Mat s = Mat::Zero(d, d);
  for (const auto& f : m.ops) s += f.adjoint() * f;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  Eigen::VectorXd ev = es.eigenvalues();
  double cut = std::max(tol.abs_eps, ev.maxCoeff() * 1e-12);
  Mat pinv_root = Mat::Zero(d, d);
  for (long i = 0; i < d; ++i)
    if (ev(i) > cut)
      pinv_root += (1.0 / std::sqrt(ev(i))) * es.eigenvectors().col(i) *
                   es.eigenvectors().col(i).adjoint();
  std::vector<Mat> out;
  for (const auto& f : m.ops) out.push_back(Mat(f * pinv_root));
  return out;
}

NormalityReport verify_normality(const LatticeFieldSystem& sys,
                                 const std::vector<int>& r1,
                                 const std::vector<int>& r2,
                                 const Tolerance& tol) {
  std::vector<int> a = check_region(sys, r1), b = check_region(sys, r2);
  for (int s : a)
    if (std::find(b.begin(), b.end(), s) != b.end())
      fail("BadInput", "regions are not disjoint");
  Mat g = grading(sys);
  auto split = [&](const std::vector<int>& region) {
    std::pair<std::vector<Mat>, std::vector<Mat>> parts;
    for (const auto& f : field_basis(sys, region)) {
      Mat even = 0.5 * (f + g * f * g);
      Mat odd = 0.5 * (f - g * f * g);
      if (even.cwiseAbs().maxCoeff() > tol.abs_eps) parts.first.push_back(even);
      if (odd.cwiseAbs().maxCoeff() > tol.abs_eps) parts.second.push_back(odd);
    }
    return parts;
  };
  auto [e1, o1] = split(a);
  auto [e2, o2] = split(b);
  double sign = sys.statistics == Statistics::fermionic ? -1.0 : 1.0;
  NormalityReport rep;
  auto resid = [](const std::vector<Mat>& f1, const std::vector<Mat>& f2, double sgn) {
    double worst = 0;
    for (const auto& x : f1)
      for (const auto& y : f2)
        worst = std::max(worst, max_abs_diff(Mat(x * y), Mat(sgn * y * x)));
    return worst;
  };
  rep.even_even = resid(e1, e2, 1.0);
  rep.even_odd = std::max(resid(e1, o2, 1.0), resid(o1, e2, 1.0));
  rep.odd_odd = resid(o1, o2, sign);
  rep.odd_odd_flipped = resid(o1, o2, -sign);
  rep.pass = rep.even_even < tol.abs_eps && rep.even_odd < tol.abs_eps &&
             rep.odd_odd < tol.abs_eps;
  return rep;
}

// ---- field algebra of triples ----

FieldAlgebra observable_skeleton(const LatticeFieldSystem& sys, const Tolerance& tol) {
  FieldAlgebra fa;
  fa.sys = sys;
  fa.a = observables(sys, sys.all_sites(), tol);
  EndomorphismModel iota;
  iota.name = "iota";
  iota.unitary = ident(sys.dim);
  iota.edim = 1;
  for (int g = 0; g < sys.gauge->sg.group.order; ++g) iota.gauge_on_e.push_back(ident(1));
  iota.conj = 0;
  iota.r = ident(sys.dim);
  iota.rbar = ident(sys.dim);
  iota.star_e = ident(1);
  fa.endos.push_back(std::move(iota));
  fa.table = {{0}};
  fa.table_t = {{ident(sys.dim)}};
  return fa;
}

int register_endomorphism(FieldAlgebra& fa, const EndomorphismModel& e,
                          const Tolerance& tol) {
  const FiniteGroup& grp = fa.sys.gauge->sg.group;
  if (!is_unitary(e.unitary, tol)) fail("BadInput", "sector unitary is not unitary");
  if ((int)e.gauge_on_e.size() != grp.order)
    fail("BadInput", "one charge-space unitary per group element expected");
  for (int g = 0; g < grp.order; ++g) {
    if (e.gauge_on_e[g].rows() != e.edim || !is_unitary(e.gauge_on_e[g], tol))
      fail("BadInput", "charge-space action is not unitary");
    for (int h = 0; h < grp.order; ++h)
      if (max_abs_diff(Mat(e.gauge_on_e[g] * e.gauge_on_e[h]),
                       e.gauge_on_e[grp.op(g, h)]) > 1e-9)
        fail("BadInput", "charge-space action is not a homomorphism");
  }
  Mat q = stack_vecs(fa.a.basis);
  for (const auto& b : fa.a.basis) {
    Mat moved = e.unitary * b * e.unitary.adjoint();
    if (span_residual(q, vec_of(moved)) > 1e-8)
      fail("AxiomViolation", "sector map does not preserve the observables");
  }
  MatrixStarAlgebra outside =
      observables(fa.sys, complement_region(fa.sys, e.region), tol);
  for (const auto& b : outside.basis)
    if (max_abs_diff(Mat(e.unitary * b * e.unitary.adjoint()), b) > 1e-8)
      fail("AxiomViolation", "sector map is not localized in its region");
  if (e.edim == 1) {
    for (int g = 0; g < grp.order; ++g) {
      Complex lam = e.gauge_on_e[g](0, 0);
      Mat moved = fa.sys.global_u[g] * e.unitary * fa.sys.global_u[g].adjoint();
      if (max_abs_diff(moved, Mat(lam * e.unitary)) > 1e-8)
        fail("AxiomViolation", "gauge action disagrees with the charge character");
    }
  }
  if (e.star_e.rows() != e.edim || !is_unitary(e.star_e, tol))
    fail("BadInput", "charge conjugation map is not unitary");
  int idx = (int)fa.endos.size();
  if (e.conj >= 0 && e.conj > idx) fail("BadInput", "conjugate index out of range");
  fa.endos.push_back(e);
  for (auto& row : fa.table) row.push_back(-1);
  for (auto& row : fa.table_t) row.push_back(Mat());
  fa.table.emplace_back(idx + 1, -1);
  fa.table_t.emplace_back(idx + 1, Mat());
  // identity sector composes trivially on both sides
  fa.table[0][idx] = idx;
  fa.table[idx][0] = idx;
  fa.table_t[0][idx] = ident(fa.sys.dim);
  fa.table_t[idx][0] = ident(fa.sys.dim);
  return idx;
}

void register_product(FieldAlgebra& fa, int i, int j, int sector, const Mat& t,
                      const Tolerance& tol) {
  int n = (int)fa.endos.size();
  if (i < 0 || i >= n || j < 0 || j >= n || sector < 0 || sector >= n)
    fail("UnknownEndomorphism", "product registration with unknown sector");
  if (fa.endos[i].edim * fa.endos[j].edim != fa.endos[sector].edim)
    fail("BadInput", "charge dimensions do not match the product sector");
  if (!is_unitary(t, tol)) fail("BadInput", "product intertwiner is not unitary");
  if (obs_span_residual(fa, t) > 1e-8)
    fail("BadInput", "product intertwiner is not an observable");
  for (const auto& b : fa.a.basis) {
    Mat lhs = apply_endo(fa, i, apply_endo(fa, j, b)) * t;
    Mat rhs = t * apply_endo(fa, sector, b);
    if (max_abs_diff(lhs, rhs) > 1e-8)
      fail("AxiomViolation", "product intertwiner fails to intertwine");
  }
  fa.table[i][j] = sector;
  fa.table_t[i][j] = t;
}

FieldAlgebra z2_field_algebra(int n_sites, const Tolerance& tol) {
  FieldAlgebra fa = observable_skeleton(z2_qubit_chain(n_sites), tol);
  EndomorphismModel rho;
  rho.name = "rho";
  rho.unitary = site_op(n_sites, 2, 0, pauli_x());
  rho.region = {0};
  rho.edim = 1;
  rho.gauge_on_e = {ident(1), Mat(-ident(1))};
  rho.conj = 1;
  rho.r = ident(fa.sys.dim);
  rho.rbar = ident(fa.sys.dim);
  rho.star_e = ident(1);
  int idx = register_endomorphism(fa, rho, tol);
  register_product(fa, idx, idx, 0, ident(fa.sys.dim), tol);
  return fa;
}

Mat apply_endo(const FieldAlgebra& fa, int k, const Mat& x) {
  if (k < 0 || k >= (int)fa.endos.size())
    fail("UnknownEndomorphism", "sector index not registered");
  return fa.endos[k].unitary * x * fa.endos[k].unitary.adjoint();
}

Mat endo_matrix(const FieldAlgebra& fa, int k) {
  const long n = (long)fa.a.basis.size();
  Mat m(n, n);
  for (long j = 0; j < n; ++j) {
    Mat moved = apply_endo(fa, k, fa.a.basis[j]);
    for (long i = 0; i < n; ++i) m(i, j) = hs(fa.a.basis[i], moved);
  }
  return m;
}

FieldElement zero_field(const FieldAlgebra& fa) { return make_zero(fa); }

FieldElement field_from_observable(const FieldAlgebra& fa, const Mat& x) {
  if (x.rows() != fa.sys.dim || x.cols() != fa.sys.dim)
    fail("ShapeMismatch", "observable has wrong shape");
  if (obs_span_residual(fa, x) > 1e-8)
    fail("BadInput", "matrix is not gauge invariant");
  FieldElement out = make_zero(fa);
  out.coef[0][0] = x;
  return out;
}

FieldElement field_unit(const FieldAlgebra& fa) {
  return field_from_observable(fa, ident(fa.sys.dim));
}

FieldElement triples_normal_form(const FieldAlgebra& fa, const std::vector<Triple>& raw,
                                 const Tolerance&) {
  FieldElement out = make_zero(fa);
  for (const auto& t : raw) {
    if (t.rho < 0 || t.rho >= (int)fa.endos.size())
      fail("UnknownEndomorphism", "triple names an unregistered sector");
    if (t.psi.size() != fa.endos[t.rho].edim)
      fail("ShapeMismatch", "charge vector has wrong length");
    if (t.a.rows() != fa.sys.dim || t.a.cols() != fa.sys.dim)
      fail("ShapeMismatch", "observable part has wrong shape");
    if (obs_span_residual(fa, t.a) > 1e-8)
      fail("BadInput", "observable part is not gauge invariant");
    for (long i = 0; i < fa.endos[t.rho].edim; ++i)
      out.coef[t.rho][i] += t.psi(i) * t.a;
  }
  return out;
}

FieldElement triples_add(const FieldAlgebra& fa, const FieldElement& x,
                         const FieldElement& y) {
  FieldElement out = x;
  for (std::size_t k = 0; k < fa.endos.size(); ++k)
    for (long i = 0; i < fa.endos[k].edim; ++i) out.coef[k][i] += y.coef[k][i];
  return out;
}

FieldElement triples_scale(const FieldAlgebra& fa, Complex c, const FieldElement& x) {
  FieldElement out = x;
  for (std::size_t k = 0; k < fa.endos.size(); ++k)
    for (long i = 0; i < fa.endos[k].edim; ++i) out.coef[k][i] *= c;
  return out;
}

FieldElement triples_mul(const FieldAlgebra& fa, const FieldElement& x,
                         const FieldElement& y) {
  FieldElement out = make_zero(fa);
  for (std::size_t k = 0; k < fa.endos.size(); ++k)
    for (std::size_t l = 0; l < fa.endos.size(); ++l) {
      bool live = false;
      for (long i = 0; i < fa.endos[k].edim && !live; ++i)
        for (long j = 0; j < fa.endos[l].edim && !live; ++j)
          live = x.coef[k][i].cwiseAbs().maxCoeff() > 1e-14 &&
                 y.coef[l][j].cwiseAbs().maxCoeff() > 1e-14;
      if (!live) continue;
      int s = fa.table[k][l];
      if (s < 0) fail("UnknownEndomorphism", "product sector is not registered");
      const Mat& t = fa.table_t[k][l];
      // registered products identify the charge spaces, so the pair (i, j)
      // lands on charge index i * edim_l + j of the product sector
      for (long i = 0; i < fa.endos[k].edim; ++i)
        for (long j = 0; j < fa.endos[l].edim; ++j)
          out.coef[s][i * fa.endos[l].edim + j] +=
              x.coef[k][i] * apply_endo(fa, (int)k, y.coef[l][j]) * t;
    }
  return out;
}

FieldElement triples_star(const FieldAlgebra& fa, const FieldElement& x) {
  FieldElement out = make_zero(fa);
  for (std::size_t k = 0; k < fa.endos.size(); ++k) {
    int kb = fa.endos[k].conj;
    bool live = false;
    for (long i = 0; i < fa.endos[k].edim; ++i)
      live = live || x.coef[k][i].cwiseAbs().maxCoeff() > 1e-14;
    if (!live) continue;
    if (kb < 0) fail("MissingConjugate", "sector has no registered conjugate");
    for (long i = 0; i < fa.endos[k].edim; ++i) {
      Mat body = fa.endos[k].r.adjoint() *
                 apply_endo(fa, kb, x.coef[k][i]).adjoint();
      for (long m = 0; m < fa.endos[kb].edim; ++m)
        out.coef[kb][m] += fa.endos[k].star_e(m, i) * body;
    }
  }
  return out;
}

double field_distance(const FieldAlgebra& fa, const FieldElement& x,
                      const FieldElement& y) {
  double worst = 0;
  for (std::size_t k = 0; k < fa.endos.size(); ++k)
    for (long i = 0; i < fa.endos[k].edim; ++i)
      worst = std::max(worst, max_abs_diff(x.coef[k][i], y.coef[k][i]));
  return worst;
}

Mat cond_expectation(const FieldAlgebra& fa, const FieldElement& x) {
  return x.coef[0][0];
}

FieldElement gauge_act(const FieldAlgebra& fa, int g, const FieldElement& x) {
  if (g < 0 || g >= fa.sys.gauge->sg.group.order)
    fail("BadInput", "group element out of range");
  FieldElement out = make_zero(fa);
  for (std::size_t k = 0; k < fa.endos.size(); ++k) {
    const Mat& u = fa.endos[k].gauge_on_e[g];
    for (long i = 0; i < fa.endos[k].edim; ++i)
      for (long j = 0; j < fa.endos[k].edim; ++j)
        out.coef[k][i] += u(i, j) * x.coef[k][j];
  }
  return out;
}

long field_dim(const FieldAlgebra& fa) {
  long n = 0;
  for (const auto& e : fa.endos) n += e.edim * (long)fa.a.basis.size();
  return n;
}

Vec field_coords(const FieldAlgebra& fa, const FieldElement& x) {
  Vec v(field_dim(fa));
  long t = 0;
  for (std::size_t k = 0; k < fa.endos.size(); ++k)
    for (long i = 0; i < fa.endos[k].edim; ++i)
      for (const auto& b : fa.a.basis) v(t++) = hs(b, x.coef[k][i]);
  return v;
}

FieldElement field_from_coords(const FieldAlgebra& fa, const Vec& v) {
  if (v.size() != field_dim(fa)) fail("ShapeMismatch", "coordinate vector length");
  FieldElement out = make_zero(fa);
  long t = 0;
  for (std::size_t k = 0; k < fa.endos.size(); ++k)
    for (long i = 0; i < fa.endos[k].edim; ++i)
      for (const auto& b : fa.a.basis) out.coef[k][i] += v(t++) * b;
  return out;
}

Mat concrete_embed(const FieldAlgebra& fa, const FieldElement& x) {
  Mat out = Mat::Zero(fa.sys.dim, fa.sys.dim);
  for (std::size_t k = 0; k < fa.endos.size(); ++k) {
    if (fa.endos[k].edim != 1)
      fail("BadInput", "matrix picture needs scalar charge spaces");
    out += x.coef[k][0] * fa.endos[k].unitary;
  }
  return out;
}

GaugeIsoReport verify_gauge_iso(const FieldAlgebra& fa, const Tolerance& tol) {
  const FiniteGroup& grp = fa.sys.gauge->sg.group;
  Rng rng(2024);
  const long n = field_dim(fa);
  std::vector<FieldElement> samples;
  for (int t = 0; t < 4; ++t)
    samples.push_back(field_from_coords(fa, rng.matrix(n, 1).col(0)));
  GaugeIsoReport rep;
  for (int g = 0; g < grp.order; ++g) {
    for (int h = 0; h < grp.order; ++h)
      for (const auto& x : samples)
        rep.homomorphism =
            std::max(rep.homomorphism,
                     field_distance(fa, gauge_act(fa, g, gauge_act(fa, h, x)),
                                    gauge_act(fa, grp.op(g, h), x)));
    for (std::size_t s = 0; s + 1 < samples.size(); ++s) {
      const auto& x = samples[s];
      const auto& y = samples[s + 1];
      rep.multiplicative = std::max(
          rep.multiplicative,
          field_distance(fa, gauge_act(fa, g, triples_mul(fa, x, y)),
                         triples_mul(fa, gauge_act(fa, g, x), gauge_act(fa, g, y))));
      rep.star = std::max(rep.star, field_distance(fa, gauge_act(fa, g, triples_star(fa, x)),
                                                   triples_star(fa, gauge_act(fa, g, x))));
      rep.m_invariance = std::max(
          rep.m_invariance,
          max_abs_diff(cond_expectation(fa, gauge_act(fa, g, x)), cond_expectation(fa, x)));
    }
    for (const auto& b : fa.a.basis) {
      FieldElement xb = field_from_observable(fa, b);
      rep.fixes_observables = std::max(
          rep.fixes_observables, field_distance(fa, gauge_act(fa, g, xb), xb));
    }
  }
  rep.injective = true;
  for (int g = 0; g < grp.order; ++g)
    for (int h = g + 1; h < grp.order; ++h) {
      double dev = 0;
      for (const auto& e : fa.endos)
        dev = std::max(dev, max_abs_diff(e.gauge_on_e[g], e.gauge_on_e[h]));
      if (dev < 1e-9) rep.injective = false;
    }
  rep.pass = rep.homomorphism < tol.abs_eps && rep.multiplicative < tol.abs_eps &&
             rep.star < tol.abs_eps && rep.fixes_observables < tol.abs_eps &&
             rep.m_invariance < tol.abs_eps && rep.injective;
  return rep;
}

IpReport verify_ip(const FieldAlgebra& fa, int rho, const Tolerance& tol) {
  if (rho < 0 || rho >= (int)fa.endos.size())
    fail("UnknownEndomorphism", "sector index not registered");
  const long e = fa.endos[rho].edim;
  std::vector<FieldElement> psi;
  for (long i = 0; i < e; ++i) {
    Vec v = Vec::Zero(e);
    v(i) = 1.0;
    psi.push_back(triples_normal_form(fa, {Triple{rho, ident(fa.sys.dim), v}}));
  }
  IpReport rep;
  FieldElement unit = field_unit(fa);
  for (long i = 0; i < e; ++i)
    for (long j = 0; j < e; ++j) {
      FieldElement prod = triples_mul(fa, triples_star(fa, psi[i]), psi[j]);
      FieldElement want = i == j ? unit : zero_field(fa);
      rep.inner = std::max(rep.inner, field_distance(fa, prod, want));
    }
  FieldElement sum = zero_field(fa);
  for (long i = 0; i < e; ++i)
    sum = triples_add(fa, sum, triples_mul(fa, psi[i], triples_star(fa, psi[i])));
  rep.cuntz = field_distance(fa, sum, unit);
  rep.pass = rep.inner < tol.abs_eps && rep.cuntz < tol.abs_eps;
  return rep;
}

// ---- GNS ----

FiniteStarAlgebra full_matrix_algebra(long d) {
  FiniteStarAlgebra alg;
  alg.dim = d * d;
  alg.unit = vec_of(ident(d));
  alg.mul = [d](const Vec& x, const Vec& y) {
    return vec_of(Mat(mat_of(x, d, d) * mat_of(y, d, d)));
  };
  alg.star = [d](const Vec& x) { return vec_of(Mat(mat_of(x, d, d).adjoint())); };
  return alg;
}

FiniteStarAlgebra field_star_algebra(const FieldAlgebra& fa) {
  auto shared = std::make_shared<FieldAlgebra>(fa);
  FiniteStarAlgebra alg;
  alg.dim = field_dim(fa);
  alg.unit = field_coords(fa, field_unit(fa));
  alg.mul = [shared](const Vec& x, const Vec& y) {
    return field_coords(*shared,
                        triples_mul(*shared, field_from_coords(*shared, x),
                                    field_from_coords(*shared, y)));
  };
  alg.star = [shared](const Vec& x) {
    return field_coords(*shared, triples_star(*shared, field_from_coords(*shared, x)));
  };
  return alg;
}

std::function<Complex(const Vec&)> trace_state(const FieldAlgebra& fa) {
  auto shared = std::make_shared<FieldAlgebra>(fa);
  return [shared](const Vec& x) {
    FieldElement e = field_from_coords(*shared, x);
    return cond_expectation(*shared, e).trace() / (double)shared->sys.dim;
  };
}

Mat GnsResult::pi(const Vec& x) const {
  Mat out = Mat::Zero(carrier_dim, carrier_dim);
  for (long i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > 0) out += x(i) * rep[i];
  return out;
}

GnsResult gns(const FiniteStarAlgebra& alg,
              const std::function<Complex(const Vec&)>& omega, const Tolerance& tol) {
  const long n = alg.dim;
  if (std::abs(omega(alg.unit) - Complex(1, 0)) > 1e-8)
    fail("BadInput", "state is not unital");
  std::vector<Vec> basis(n, Vec::Zero(n));
  for (long i = 0; i < n; ++i) basis[i](i) = 1.0;
  std::vector<Vec> starred;
  for (long i = 0; i < n; ++i) starred.push_back(alg.star(basis[i]));
  Mat gram(n, n);
  std::vector<Mat> left(n, Mat(n, n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      Vec prod = alg.mul(basis[i], basis[j]);
      left[i].col(j) = prod;
      gram(i, j) = omega(alg.mul(starred[i], basis[j]));
    }
  if (max_abs_diff(gram, Mat(gram.adjoint())) > 1e-8)
    fail("StateNotPositive", "state form is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Mat(0.5 * (gram + gram.adjoint())));
  Eigen::VectorXd ev = es.eigenvalues();
  double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -std::max(tol.abs_eps, top * 1e-10))
    fail("StateNotPositive", "state form has a negative eigenvalue");
  double cut = std::max(tol.abs_eps, top * 1e-12);
  std::vector<long> keep;
  for (long i = 0; i < n; ++i)
    if (ev(i) > cut) keep.push_back(i);
  GnsResult out;
  out.carrier_dim = (long)keep.size();
  out.carrier_map = Mat(out.carrier_dim, n);
  out.carrier_pinv = Mat(n, out.carrier_dim);
  for (long r = 0; r < out.carrier_dim; ++r) {
    double root = std::sqrt(ev(keep[r]));
    out.carrier_map.row(r) = root * es.eigenvectors().col(keep[r]).adjoint();
    out.carrier_pinv.col(r) = es.eigenvectors().col(keep[r]) / root;
  }
  for (long i = 0; i < n; ++i)
    out.rep.push_back(Mat(out.carrier_map * left[i] * out.carrier_pinv));
  out.cyclic = out.carrier_map * alg.unit;
  return out;
}

ImplementReport implementing_unitaries(const GnsResult& g, const std::vector<Mat>& autos,
                                       const Tolerance& tol) {
  ImplementReport rep;
  Mat id = ident(g.carrier_dim);
  for (const auto& k : autos) {
    Mat u = g.carrier_map * k * g.carrier_pinv;
    rep.unitary = std::max(rep.unitary, max_abs_diff(Mat(u.adjoint() * u), id));
    rep.fixes_cyclic = std::max(rep.fixes_cyclic, Vec(u * g.cyclic - g.cyclic).norm());
    for (std::size_t i = 0; i < g.rep.size(); ++i) {
      Mat moved = u * g.rep[i] * u.adjoint();
      Mat want = g.pi(k.col((long)i));
      rep.covariant = std::max(rep.covariant, max_abs_diff(moved, want));
    }
    rep.u.push_back(std::move(u));
  }
  rep.pass = rep.unitary < tol.abs_eps * 100 && rep.covariant < tol.abs_eps * 100 &&
             rep.fixes_cyclic < tol.abs_eps * 100;
  return rep;
}

double field_norm(const FieldAlgebra& fa, const GnsResult& g, const FieldElement& x) {
  return op_norm(g.pi(field_coords(fa, x)));
}

double component_norm(const FieldAlgebra& fa, const FieldElement& x) {
  double worst = 0;
  for (std::size_t k = 0; k < fa.endos.size(); ++k) {
    Mat row(fa.sys.dim, fa.sys.dim * fa.endos[k].edim);
    for (long i = 0; i < fa.endos[k].edim; ++i)
      row.middleCols(i * fa.sys.dim, fa.sys.dim) = x.coef[k][i];
    worst = std::max(worst, op_norm(row));
  }
  return worst;
}

}  // namespace stc
