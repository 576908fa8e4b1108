#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace stc {

using Complex = std::complex<double>;

// All morphism data lives in dense row-major complex matrices.
using Mat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXcd;

struct Tolerance {
  double abs_eps = 1e-9;
  double rel_eps = 1e-8;
};

// Exception carrying a stable machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
  throw Error(code, msg);
}

inline Mat ident(Eigen::Index n) { return Mat::Identity(n, n); }
inline Mat zeros(Eigen::Index r, Eigen::Index c) { return Mat::Zero(r, c); }
inline Mat scalar_mat(Complex z) {
  Mat m(1, 1);
  m(0, 0) = z;
  return m;
}

Mat kron(const Mat& a, const Mat& b);

// Largest entrywise deviation; shapes must agree.
double max_abs_diff(const Mat& a, const Mat& b);
bool approx_equal(const Mat& a, const Mat& b, const Tolerance& tol = {});
bool approx_zero(const Mat& a, const Tolerance& tol = {});

// Orthonormal basis of the kernel of a, as columns. Rank decisions use a
// singular-value cutoff at abs_eps scaled by the largest singular value.
Mat nullspace(const Mat& a, const Tolerance& tol = {});

// Isometry v with v v* = p for a projection p. Throws NotAProjection.
Mat orthonormal_range(const Mat& p, const Tolerance& tol = {});

// Orthonormal basis of the column span (same cutoff policy as nullspace).
Mat orthonormal_span(const Mat& a, const Tolerance& tol = {});

// Make the first nonzero entry of each column real and positive.
Mat fix_phase(Mat v, const Tolerance& tol = {});

bool is_projection(const Mat& p, const Tolerance& tol = {});
bool is_unitary(const Mat& u, const Tolerance& tol = {});

// Operator (spectral) norm.
double op_norm(const Mat& a);

// Deterministic RNG shared by all randomized property checks.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double real();                        // uniform on [-1, 1]
  Complex cplx();                       // real() + i real()
  int integer(int lo, int hi);          // inclusive bounds
  Mat matrix(Eigen::Index r, Eigen::Index c);
  Mat unitary(Eigen::Index n);          // QR of a random matrix
  Mat hermitian(Eigen::Index n);
};

// Row-major multi-index helpers for tensor legs of equal dimension d.
// flat = sum_i idx[i] * d^(n-1-i).
std::vector<int> unflatten_index(long flat, int d, int n);
long flatten_index(const std::vector<int>& idx, int d);

// Apply a two-leg gate c (d^2 x d^2) to legs (pos, pos+1) of the row index of
// m, whose row space is a tensor power with n legs of dimension d. Equivalent
// to kron(I_{d^pos}, c, I_{d^{n-pos-2}}) * m without forming the big matrix.
Mat apply_two_leg_gate(const Mat& c, const Mat& m, int d, int n, int pos);

// Column-side variant: m * kron(I_{d^pos}, c, I_{d^{n-pos-2}}).
Mat apply_two_leg_gate_right(const Mat& c, const Mat& m, int d, int n, int pos);

}  // namespace stc
