#include "stc/numkernel.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace stc {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail("ShapeMismatch", "comparing " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              " with " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const Mat& a, const Mat& b, const Tolerance& tol) {
  double scale = 0.0;
  if (a.size() > 0) scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return max_abs_diff(a, b) <= tol.abs_eps + tol.rel_eps * scale;
}

bool approx_zero(const Mat& a, const Tolerance& tol) {
  if (a.size() == 0) return true;
  return a.cwiseAbs().maxCoeff() <= tol.abs_eps;
}

Mat nullspace(const Mat& a, const Tolerance& tol) {
  if (a.size() == 0) return ident(a.cols());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cutoff = tol.abs_eps * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Mat orthonormal_span(const Mat& a, const Tolerance& tol) {
  if (a.size() == 0 || a.cols() == 0) return zeros(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cutoff = tol.abs_eps * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

bool is_projection(const Mat& p, const Tolerance& tol) {
  if (p.rows() != p.cols()) return false;
  return approx_equal(p, p * p, tol) && approx_equal(p, p.adjoint(), tol);
}

bool is_unitary(const Mat& u, const Tolerance& tol) {
  if (u.rows() != u.cols()) return false;
  return approx_equal(Mat(u.adjoint() * u), ident(u.rows()), tol);
}

Mat orthonormal_range(const Mat& p, const Tolerance& tol) {
  // Looser gate than the comparison tolerance: inputs are often assembled
  // from long kron/sum chains and carry a few ulps more noise.
  Tolerance gate{std::max(tol.abs_eps * 100, 1e-8), tol.rel_eps};
  if (!is_projection(p, gate)) fail("NotAProjection", "matrix is not idempotent self-adjoint");
  Mat h = (p + p.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::Index n = p.rows(), rank = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.5) ++rank;
  Mat v = es.eigenvectors().rightCols(rank);
  return fix_phase(std::move(v), tol);
}

Mat fix_phase(Mat v, const Tolerance& tol) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      double m = std::abs(v(i, j));
      if (m > tol.abs_eps * 100) {
        Complex ph = v(i, j) / m;
        v.col(j) *= std::conj(ph);
        break;
      }
    }
  }
  return v;
}

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double Rng::real() {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return d(engine);
}

Complex Rng::cplx() {
  double re = real();
  double im = real();
  return {re, im};
}

int Rng::integer(int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(engine);
}

Mat Rng::matrix(Eigen::Index r, Eigen::Index c) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx();
  return m;
}

Mat Rng::unitary(Eigen::Index n) {
  Mat m = matrix(n, n);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    double m2 = std::abs(d);
    q.col(i) *= (m2 > 0 ? d / m2 : Complex(1, 0));
  }
  return q;
}

Mat Rng::hermitian(Eigen::Index n) {
  Mat m = matrix(n, n);
  return (m + m.adjoint()) / 2.0;
}

std::vector<int> unflatten_index(long flat, int d, int n) {
  std::vector<int> idx(n);
  for (int i = n - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat % d);
    flat /= d;
  }
  return idx;
}

long flatten_index(const std::vector<int>& idx, int d) {
  long flat = 0;
  for (int v : idx) flat = flat * d + v;
  return flat;
}

Mat apply_two_leg_gate(const Mat& c, const Mat& m, int d, int n, int pos) {
  long left = 1, right = 1;
  for (int i = 0; i < pos; ++i) left *= d;
  for (int i = pos + 2; i < n; ++i) right *= d;
  const long dd = static_cast<long>(d) * d;
  Mat out = zeros(m.rows(), m.cols());
  // row index = a * dd * right + s * right + b with a < left, s < dd, b < right
  for (long a = 0; a < left; ++a)
    for (long s = 0; s < dd; ++s)
      for (long sp = 0; sp < dd; ++sp) {
        Complex w = c(s, sp);
        if (w == Complex(0, 0)) continue;
        out.middleRows(a * dd * right + s * right, right) +=
            w * m.middleRows(a * dd * right + sp * right, right);
      }
  return out;
}

Mat apply_two_leg_gate_right(const Mat& c, const Mat& m, int d, int n, int pos) {
  long left = 1, right = 1;
  for (int i = 0; i < pos; ++i) left *= d;
  for (int i = pos + 2; i < n; ++i) right *= d;
  const long dd = static_cast<long>(d) * d;
  Mat out = zeros(m.rows(), m.cols());
  for (long a = 0; a < left; ++a)
    for (long s = 0; s < dd; ++s)
      for (long sp = 0; sp < dd; ++sp) {
        Complex w = c(sp, s);
        if (w == Complex(0, 0)) continue;
        out.middleCols(a * dd * right + s * right, right) +=
            w * m.middleCols(a * dd * right + sp * right, right);
      }
  return out;
}

}  // namespace stc
