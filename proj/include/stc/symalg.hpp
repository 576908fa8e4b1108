#pragma once

// Monoids internal to the representation category: truncated symmetric
// algebras, direct-product monoids, absorption morphisms, and the
// function-algebra monoid on a finite group.

#include <map>

#include "stc/statrep.hpp"

namespace stc {

// Truncated symmetric algebra data: component spaces S_i(Z) together with
// isometries u_i embedding them into the i-th tensor power of the base.
struct GradedComponent {
  RepObject space;
  Mat u;  // dim(Z)^i by dim S_i(Z), u* u = id, u u* = symmetrizer
};

struct GradedObject {
  RepObject base;
  int max_degree = 0;
  std::vector<GradedComponent> components;  // degree 0 .. max_degree
  int dim(int i) const { return components[static_cast<size_t>(i)].space.dim; }
};

GradedObject symmetric_powers(const RepObject& z, int max_degree,
                              SymmetryKind kind = SymmetryKind::plain,
                              const Tolerance& tol = {});

// Degree components of the multiplication, m_{i,j} = u_{i+j}* (u_i x u_j).
// Entry [i][j] is present when i + j <= max_degree.
std::vector<std::vector<Mat>> mult_maps(const GradedObject& g);
Mat graded_mult(const GradedObject& g, int i, int j);  // DegreeOverflow past N

struct GradedMultReport {
  double assoc_residual = 0;
  double comm_residual = 0;
  double unit_residual = 0;
  bool pass = false;
};
GradedMultReport verify_mult_maps(const GradedObject& g, const Tolerance& tol = {});

// Dense monoid in the category: carrier with multiplication and unit.
struct MonoidObject {
  RepObject carrier;
  Morphism m;    // Q x Q -> Q
  Morphism eta;  // 1 -> Q
};

struct MonoidReport {
  double assoc_residual = 0;
  double unit_residual = 0;
  double comm_residual = 0;
  bool pass = false;
};
MonoidReport verify_monoid(const MonoidObject& q, bool commutative = true,
                           const Tolerance& tol = {});

MonoidObject trivial_monoid(CatalogPtr cat);
MonoidObject product_monoid(const MonoidObject& q1, const MonoidObject& q2,
                            SymmetryKind kind = SymmetryKind::plain,
                            const Tolerance& tol = {});

// d-fold power Q = (S_{<=N}(Z))^(x d), handled per multidegree component so
// the full multiplication matrix is never materialized.
using MultiDeg = std::vector<int>;

struct GradedMor {
  int src_dim = 1;
  std::map<MultiDeg, Mat> comps;  // component into tensor of S_{deg[l]}(Z)
};

struct GradedMonoid {
  GradedObject g;
  int factors = 1;
  std::vector<std::vector<Mat>> m;  // cached mult_maps of g
  long comp_dim(const MultiDeg& deg) const;
  // multiplication component (gamma, delta) -> gamma + delta
  Mat comp_mult(const MultiDeg& gamma, const MultiDeg& delta) const;
};

GradedMonoid graded_power_monoid(const GradedObject& g, int factors);
GradedMor monoid_unit(const GradedMonoid& q);
// m_Q (a x b) computed componentwise; products past the truncation vanish
GradedMor monoid_apply(const GradedMonoid& q, const GradedMor& a, const GradedMor& b);
GradedMor graded_compose(const GradedMor& a, const Mat& pre);
double graded_distance(const GradedMor& a, const GradedMor& b);
double graded_norm(const GradedMor& a);
// dense assembly over all multidegrees, for cross checks on small examples
MonoidObject dense_monoid(const GradedMonoid& q);

// Absorption data on a determinant-free object: f, u_i, t_i with
// m_Q (t_j x u_i) s = delta_ij f.
struct AbsorptionData {
  Mat s;  // isometry 1 -> Z^(x d) onto the top antisymmetric line
  GradedMor f;
  std::vector<GradedMor> u;  // u[i-1]: Z -> Q
  std::vector<GradedMor> t;  // t[i-1]: Z^(x d-1) -> Q
};

struct AbsorptionReport {
  int d = 0;
  double f_norm = 0;
  std::vector<std::vector<double>> residuals;  // [j][i]
  bool pass = false;
};

struct AbsorptionResult {
  AbsorptionData data;
  AbsorptionReport report;
};

AbsorptionResult absorption_morphisms(const RepObject& z, const GradedObject& g,
                                      const Tolerance& tol = {});

// invariant counts per degree
std::vector<int> gamma_grading(const GradedObject& g, const Tolerance& tol = {});

// Function algebra on a finite group: pointwise product, constant unit,
// translation action. Every irrep X splits Q x X into d(X) copies of Q.
struct ModuleSplit {
  int irrep_index = 0;
  int multiplicity = 0;
  double isometry_residual = 0;
  double module_law_residual = 0;
  double completeness_residual = 0;
};

struct RegularMonoidReport {
  MonoidReport axioms;
  int hom_unit_dim = 0;
  int end_module_dim = 0;
  double gamma_residual = 0;
  std::vector<ModuleSplit> splits;
  bool pass = false;
};

struct RegularMonoidResult {
  MonoidObject monoid;
  RegularMonoidReport report;
};

RegularMonoidResult regular_monoid(CatalogPtr cat, const Tolerance& tol = {});

}  // namespace stc
