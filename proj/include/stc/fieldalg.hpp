#pragma once
// Finite lattice field systems with a global gauge group: local operator
// algebras, their gauge invariants, commutant and sector structure, covariant
// multiplets, and the field algebra of triples (observable, sector, charge
// vector) with star, conditional expectation, gauge action and GNS data.

#include "stc/group.hpp"
#include "stc/numkernel.hpp"
#include "stc/repcat.hpp"

#include <functional>
#include <string>
#include <vector>

namespace stc {

enum class Statistics { bosonic, fermionic };

// span of matrices closed under product and adjoint, with the full matrix
// block dimensions of its Wedderburn decomposition when known
struct MatrixStarAlgebra {
  long ambient = 0;
  std::vector<long> blocks;
  std::vector<Mat> basis;  // orthonormal in the trace inner product
};

struct LatticeFieldSystem {
  int n_sites = 0;
  long site_dim = 0;
  Statistics statistics = Statistics::bosonic;
  CatalogPtr gauge;
  std::vector<Mat> site_u;    // gauge rep on one site, per group element
  std::vector<Mat> global_u;  // U(g) = site tensor power
  long dim = 0;               // carrier dimension site_dim^n_sites
  std::vector<Mat> majorana;  // fermionic chains: 2 n_sites odd generators

  std::vector<int> all_sites() const;
};

LatticeFieldSystem build_lattice(int n_sites, long site_dim, CatalogPtr gauge,
                                 const std::vector<Mat>& site_rep, Statistics st,
                                 const Tolerance& tol = {});
// gauge Z2 acting by diag(1,-1) on each qubit
LatticeFieldSystem z2_qubit_chain(int n_sites);
// Jordan-Wigner fermion chain; gauge Z2 generated by total parity
LatticeFieldSystem fermion_chain(int n_sites);
// permutation-type S3 gauge on three-dimensional sites
LatticeFieldSystem s3_chain(int n_sites);

// grading unitary U(k), identity when the gauge group declares no k
Mat grading(const LatticeFieldSystem& sys);

// orthonormal operator basis of the local algebra F(region); fermionic
// regions use ordered products of the region's Jordan-Wigner generators
std::vector<Mat> field_basis(const LatticeFieldSystem& sys,
                             const std::vector<int>& region);

// gauge invariants of F(region)
MatrixStarAlgebra observables(const LatticeFieldSystem& sys,
                              const std::vector<int>& region,
                              const Tolerance& tol = {});

// basis of { x : [x, a] = 0 for all spanning a }
std::vector<Mat> commutant(const std::vector<Mat>& basis, long ambient,
                           const Tolerance& tol = {});

struct CommutantReport {
  long dim_observables = 0;
  long dim_commutant = 0;
  double group_to_commutant = 0;  // span{U(g)} inside the commutant
  double commutant_to_group = 0;  // commutant inside span{U(g)}
  double double_commutant = 0;    // A'' against A
  bool pass = false;
};
CommutantReport verify_commutant_theorem(const LatticeFieldSystem& sys,
                                         const Tolerance& tol = {});

// projector onto the sigma-isotypic subspace of the carrier
Mat isotypic_projector(const LatticeFieldSystem& sys, int sigma,
                       const Tolerance& tol = {});

struct SectorDecomposition {
  std::vector<int> sectors;  // irrep indices with nonzero isotypic rank
  std::vector<Mat> projectors;
  std::vector<long> ranks;
  double completeness = 0;   // sum of projectors against the identity
  double orthogonality = 0;
  double commutation = 0;    // against the observable basis
};
SectorDecomposition sector_decompose(const LatticeFieldSystem& sys,
                                     const Tolerance& tol = {});

// averaged operator (1/|G|) sum_g <phi, U(g) psi> U(g) f U(g)*
Mat multiplet_average(const LatticeFieldSystem& sys, const Vec& phi, const Vec& psi,
                      const Mat& f);

struct Multiplet {
  int irrep = 0;
  std::vector<Mat> ops;
  double covariance = 0;     // alpha_g(F_i) = sum_j pi(g)_{ji} F_j
  double orthogonality = 0;  // averaged F_i* F_j against delta_ij S / d
};
Multiplet find_multiplet(const LatticeFieldSystem& sys, const std::vector<int>& region,
                         int xi, const Tolerance& tol = {});
// partial isometries V_i with V_i |F| = F_i for |F| = (sum F_j* F_j)^(1/2)
std::vector<Mat> polar_multiplet(const Multiplet& m, const Tolerance& tol = {});

struct NormalityReport {
  double even_even = 0;
  double even_odd = 0;
  double odd_odd = 0;       // residual of the statistics-determined sign rule
  double odd_odd_flipped = 0;  // distance from the opposite sign rule
  bool pass = false;
};
// graded commutation relations between F(r1) and F(r2) for disjoint regions
NormalityReport verify_normality(const LatticeFieldSystem& sys,
                                 const std::vector<int>& r1,
                                 const std::vector<int>& r2,
                                 const Tolerance& tol = {});

// ---- field algebra of triples ----

// transportable sector datum: an algebra endomorphism implemented by a
// unitary, its localization region, the charge space E(rho) with the gauge
// action on it, and conjugate intertwiner data
struct EndomorphismModel {
  std::string name;
  Mat unitary;              // rho = Ad(unitary) restricted to the observables
  std::vector<int> region;
  long edim = 1;            // dim E(rho) = statistical dimension
  std::vector<Mat> gauge_on_e;  // per group element, edim x edim unitary
  int conj = -1;            // registry index of the conjugate sector, -1 if absent
  Mat r, rbar;              // carrier-level solutions of the conjugate equations
  Mat star_e;               // antilinear charge map: psi* = star_e * conj(psi)
};

struct FieldAlgebra {
  LatticeFieldSystem sys;
  MatrixStarAlgebra a;  // observables of the whole chain
  std::vector<EndomorphismModel> endos;  // [0] is the identity sector
  std::vector<std::vector<int>> table;   // sector of rho_i rho_j, -1 unregistered
  std::vector<std::vector<Mat>> table_t; // unitary in Hom(rho_sector, rho_i rho_j)
};

// observables plus one identity sector; further sectors via register_*
FieldAlgebra observable_skeleton(const LatticeFieldSystem& sys,
                                 const Tolerance& tol = {});
int register_endomorphism(FieldAlgebra& fa, const EndomorphismModel& e,
                          const Tolerance& tol = {});
void register_product(FieldAlgebra& fa, int i, int j, int sector, const Mat& t,
                      const Tolerance& tol = {});
// qubit chain with one odd order-two sector localized at site 0
FieldAlgebra z2_field_algebra(int n_sites, const Tolerance& tol = {});

// action of sector k on an observable
Mat apply_endo(const FieldAlgebra& fa, int k, const Mat& x);
// coordinate matrix of that action on the observable basis
Mat endo_matrix(const FieldAlgebra& fa, int k);

struct Triple {
  int rho = 0;
  Mat a;
  Vec psi;
};

// normal form: one matrix coefficient per sector and charge basis vector
struct FieldElement {
  std::vector<std::vector<Mat>> coef;
};

FieldElement zero_field(const FieldAlgebra& fa);
FieldElement field_from_observable(const FieldAlgebra& fa, const Mat& x);
FieldElement field_unit(const FieldAlgebra& fa);
FieldElement triples_normal_form(const FieldAlgebra& fa,
                                 const std::vector<Triple>& raw,
                                 const Tolerance& tol = {});
FieldElement triples_add(const FieldAlgebra& fa, const FieldElement& x,
                         const FieldElement& y);
FieldElement triples_scale(const FieldAlgebra& fa, Complex c, const FieldElement& x);
FieldElement triples_mul(const FieldAlgebra& fa, const FieldElement& x,
                         const FieldElement& y);
FieldElement triples_star(const FieldAlgebra& fa, const FieldElement& x);
double field_distance(const FieldAlgebra& fa, const FieldElement& x,
                      const FieldElement& y);

// conditional expectation onto the observables: the identity-sector part
Mat cond_expectation(const FieldAlgebra& fa, const FieldElement& x);
FieldElement gauge_act(const FieldAlgebra& fa, int g, const FieldElement& x);

struct GaugeIsoReport {
  double homomorphism = 0;      // alpha_g alpha_h = alpha_{gh} on samples
  double multiplicative = 0;    // alpha_g(xy) = alpha_g(x) alpha_g(y)
  double star = 0;              // alpha_g(x*) = alpha_g(x)*
  double fixes_observables = 0;
  double m_invariance = 0;      // m after alpha_g equals m
  bool injective = false;
  bool pass = false;
};
GaugeIsoReport verify_gauge_iso(const FieldAlgebra& fa, const Tolerance& tol = {});

struct IpReport {
  double inner = 0;  // Psi_i* Psi_j = <e_i, e_j> 1
  double cuntz = 0;  // sum_i Psi_i Psi_i* = 1
  bool pass = false;
};
IpReport verify_ip(const FieldAlgebra& fa, int rho, const Tolerance& tol = {});

// coordinates of the field algebra as a finite vector space
long field_dim(const FieldAlgebra& fa);
Vec field_coords(const FieldAlgebra& fa, const FieldElement& x);
FieldElement field_from_coords(const FieldAlgebra& fa, const Vec& v);

// faithful matrix picture a_0 + sum a_k u_k, defined for scalar sectors
Mat concrete_embed(const FieldAlgebra& fa, const FieldElement& x);

// ---- GNS construction for finite *-algebras in coordinates ----

struct FiniteStarAlgebra {
  long dim = 0;
  Vec unit;
  std::function<Vec(const Vec&, const Vec&)> mul;
  std::function<Vec(const Vec&)> star;
};

FiniteStarAlgebra full_matrix_algebra(long d);
FiniteStarAlgebra field_star_algebra(const FieldAlgebra& fa);
// the state tr(m(x)) / dim composed with the conditional expectation
std::function<Complex(const Vec&)> trace_state(const FieldAlgebra& fa);

struct GnsResult {
  long carrier_dim = 0;
  Mat carrier_map;   // class map from algebra coordinates to the carrier
  Mat carrier_pinv;
  std::vector<Mat> rep;  // representation of each coordinate basis element
  Vec cyclic;

  Mat pi(const Vec& x) const;
};

GnsResult gns(const FiniteStarAlgebra& alg,
              const std::function<Complex(const Vec&)>& omega,
              const Tolerance& tol = {});

struct ImplementReport {
  std::vector<Mat> u;
  double unitary = 0;
  double covariant = 0;      // U(g) pi(x) U(g)* = pi(alpha_g x)
  double fixes_cyclic = 0;   // U(g) Omega = Omega
  bool pass = false;
};
// autos: coordinate matrices of the automorphisms to implement
ImplementReport implementing_unitaries(const GnsResult& g, const std::vector<Mat>& autos,
                                       const Tolerance& tol = {});

// operator norm in the GNS representation (the C*-norm when the state is
// faithful) and the per-sector coefficient norm bound
double field_norm(const FieldAlgebra& fa, const GnsResult& g, const FieldElement& x);
double component_norm(const FieldAlgebra& fa, const FieldElement& x);

}  // namespace stc
