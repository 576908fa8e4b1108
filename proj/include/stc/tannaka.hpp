#pragma once

// Fiber functors on a concrete representation category, the commutative
// *-algebra spanned by hom blocks over the irrep list, its characters and the
// induced monoidal natural transformations, group reconstruction, uniqueness
// of fiber functors, inner-product repair, and monoid automorphisms.

#include "stc/symalg.hpp"

namespace stc {

struct FiberFunctor {
  enum class Kind { forgetful, monoid_derived, auto_twisted, metric_skewed };
  Kind kind = Kind::forgetful;
  // adjoint-twisted companion functor s -> E(s*)^sharp used in the repair
  bool tilde = false;
  CatalogPtr cat;
  std::vector<int> dims;  // dim E(X_i) per irrep

  // monoid_derived: invariant vectors of Q (x) X_i as basis columns (the
  // trivial block carries eta itself so the unit coherence is the identity),
  // plus strictified bases for pair words, all with pseudo-inverses
  MonoidObject monoid;
  std::vector<Mat> inv_basis, inv_pinv;
  std::vector<std::vector<Mat>> pair_basis, pair_pinv;
  Mat unit_basis, unit_pinv;  // eta as the basis of E(unit object)

  // auto_twisted: irrep relabeling induced by a group automorphism, with the
  // identifying unitaries v_i: pi_i(beta(.)) -> pi_{perm(i)}
  std::vector<int> beta;
  std::vector<int> irrep_perm;
  std::vector<Mat> twist_u;

  // metric_skewed: positive inner-product matrix per irrep (identity block
  // for the trivial irrep)
  std::vector<Mat> metric;

  // canonical group candidates: per group element, per irrep
  std::vector<std::vector<Mat>> group_images;
};

FiberFunctor forgetful(CatalogPtr cat);
FiberFunctor fiber_from_monoid(const MonoidObject& q, const Tolerance& tol = {});
FiberFunctor auto_twisted(CatalogPtr cat, const std::vector<int>& beta,
                          const Tolerance& tol = {});
FiberFunctor metric_skewed(CatalogPtr cat, const std::vector<Mat>& metrics,
                           const Tolerance& tol = {});

// E on a morphism between words of irreps (length 0, 1 or 2), with all
// coherences folded in so that E(word) = tensor of the per-irrep carriers.
Mat functor_apply(const FiberFunctor& e, const std::vector<int>& dst_word,
                  const std::vector<int>& src_word, const Mat& s);
long functor_dim(const FiberFunctor& e, const std::vector<int>& word);

int trivial_irrep_index(const CatalogPtr& cat);

// coherent conjugate pairing over the irrep list: solutions r_i into
// X_conj(i) (x) X_i with the partner convention making the star involutive
struct ConjPairing {
  std::vector<int> partner;
  std::vector<Mat> r, rbar;  // column vectors
};
ConjPairing conj_pairing(const CatalogPtr& cat, const Tolerance& tol = {});

struct AlgebraAE {
  CatalogPtr cat;
  std::vector<int> d1, d2;   // block shapes: Hom(E2(X_i), E1(X_i))
  std::vector<long> off;
  long dim = 0;
  int unit_block = 0;
  std::vector<Mat> left;     // left multiplication by each basis element
  Vec unit;
  Mat star_mat;              // star(x) = star_mat * conj(x)

  long index(int irrep, int row, int col) const;
  Vec embed(int irrep, const Mat& s) const;
  Mat block(const Vec& a, int irrep) const;
  Vec mul(const Vec& a, const Vec& b) const;
  Vec star(const Vec& a) const;
};

AlgebraAE build_AE(const FiberFunctor& e1, const FiberFunctor& e2,
                   const Tolerance& tol = {});

struct Character {
  Vec coeffs;  // phi(a) = coeffs . a
  bool star = false;
  Complex eval(const Vec& a) const { return coeffs.transpose() * a; }
};

std::vector<Character> characters(const AlgebraAE& a, const Tolerance& tol = {});

// max |phi(x)| over the character space: the C*-norm of the finite
// commutative algebra
double gelfand_norm(const std::vector<Character>& chars, const Vec& x);
// sup of block operator norms of the normal form, a representative-wise bound
double rep_norm(const AlgebraAE& a, const Vec& x);

struct NatTrans {
  std::vector<Mat> family;  // component E1(X_i) -> E2(X_i) per irrep
};

NatTrans char_to_nat(const AlgebraAE& a, const Character& phi);
double unitarity_residual(const NatTrans& alpha);
double monoidality_residual(const FiberFunctor& e1, const FiberFunctor& e2,
                            const NatTrans& alpha, const Tolerance& tol = {});
double nat_distance(const NatTrans& a, const NatTrans& b);

struct ReconstructionResult {
  std::vector<NatTrans> elements;
  std::vector<std::vector<int>> table;  // table[p][q] = index of p after q
  std::vector<int> bijection;           // group element -> element index
  double residual = 0;
  bool iso_ok = false;
};

ReconstructionResult reconstruct_group(const FiberFunctor& e, const Tolerance& tol = {});

NatTrans unitary_monoidal_iso(const FiberFunctor& e1, const FiberFunctor& e2,
                              const Tolerance& tol = {});

struct StarRepair {
  int character_index = -1;
  std::vector<Mat> alpha;       // positive components of the chosen character
  std::vector<Mat> new_metric;  // repaired inner products per irrep
  double min_eig = 0;
  double adjoint_residual = 0;  // E(s*) vs new-metric adjoint of E(s)
  double unitary_residual = 0;  // group action unitary in the new products
  bool pass = false;
};

StarRepair make_star_preserving(const FiberFunctor& e, const Tolerance& tol = {});

struct MonoidAutoResult {
  std::vector<Mat> autos;
  std::vector<std::vector<int>> table;
  std::vector<int> match;  // automorphism -> index in reconstruct_group output
  double residual = 0;
  bool comparison_ok = false;
};

MonoidAutoResult monoid_automorphisms(const MonoidObject& q, const Tolerance& tol = {});

struct SpanReport {
  int rank = 0;
  int expected = 0;
  bool pass = false;
};

SpanReport dense_span_check(const FiberFunctor& e, int irrep_index,
                            const Tolerance& tol = {});
SpanReport dense_span_pair_check(const FiberFunctor& e, int i, int j,
                                 const Tolerance& tol = {});

}  // namespace stc
