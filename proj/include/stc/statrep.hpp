#pragma once

#include <vector>

#include "stc/repcat.hpp"

namespace stc {

// Permutation on n strands, stored in one-line form (0-based images).
struct Permutation {
  int n = 0;
  std::vector<int> oneline;

  static Permutation identity(int n);
  // Throws BadWord unless ol is a bijection of 0..n-1.
  static Permutation from_one_line(std::vector<int> ol);
  // Word letters are 1-based adjacent transpositions 1..n-1. Throws BadWord.
  static Permutation from_word(int n, const std::vector<int>& word);

  std::vector<int> word() const;  // bubble-sort decomposition, 1-based letters
  int sign() const;
  int cycle_count() const;
  Permutation compose(const Permutation& other) const;  // this after other
  int image(int i) const { return oneline[i]; }
};

// Unitary representation of the symmetric group on x^(x)n generated by the
// braiding on adjacent factors.
Morphism perm_rep(const RepObject& x, int n, SymmetryKind kind, const Permutation& sigma);

// Word letters +-1..+-(n-1); negative letters are inverses, which coincide
// with the generators here since the braiding squares to the identity.
Morphism braid_word_rep(const RepObject& x, int n, SymmetryKind kind,
                        const std::vector<int>& word);

Morphism symmetrizer(const RepObject& x, int n, SymmetryKind kind);
Morphism antisymmetrizer(const RepObject& x, int n, SymmetryKind kind);

struct TraceReport {
  int n = 0;
  double trace = 0;          // categorical trace of the antisymmetrizer
  double formula_value = 0;  // d(d-1)...(d-n+1)/n!
  double residual = 0;
  bool pass = false;
};
// Throws OddCategory for super kind on objects with nontrivial twist.
TraceReport trace_antisymmetrizer(const RepObject& x, int n, SymmetryKind kind,
                                  const Tolerance& tol = {});

struct IntegralityReport {
  double dim = 0;
  long rounded = 0;
  double dim_residual = 0;
  std::vector<TraceReport> traces;  // n = 2 .. rounded+2
  bool pass = false;
};
IntegralityReport verify_dimension_integral(const RepObject& x, const Tolerance& tol = {});

// The 1-dimensional object carried by the top antisymmetrizer.
// Throws OddCategory (super kind, odd object), DegreeOverflow (d > 6).
RepObject determinant(const RepObject& x, SymmetryKind kind = SymmetryKind::plain,
                      const Tolerance& tol = {});

// Residual of "a isomorphic to b" for 1-dimensional objects via a unitary
// hom witness; +inf when the hom space is empty.
double iso1_residual(const RepObject& a, const RepObject& b, const Tolerance& tol = {});

struct DetCheckReport {
  double sum_rule_residual = 0;   // det(x+y) ~ det(x)(x)det(y)
  double conj_rule_residual = 0;  // det(xbar) ~ conj(det(x))
  bool pass = false;
};
DetCheckReport det_product_check(const RepObject& x, const RepObject& y,
                                 const Tolerance& tol = {});

// Isometry s with s s* = A_d, phase-fixed; input to the contraction identity.
Mat det_isometry(const RepObject& x, const Tolerance& tol = {});

struct ContractionReport {
  Complex expected;  // (-1)^(d-1)/d
  double residual = 0;
  bool pass = false;
};
// Throws DetNotTrivial unless det(x) is trivial.
ContractionReport contraction_identity(const RepObject& x, const Mat& s,
                                       const Tolerance& tol = {});

enum class StatKind { para_bose, para_fermi };
struct StatisticsClass {
  int dimension = 0;
  int phase = 0;  // +-1
  StatKind kind = StatKind::para_bose;
  int order = 0;
};
// Throws NotIrreducible.
StatisticsClass statistics_classify(const RepObject& x, SymmetryKind kind,
                                    const Tolerance& tol = {});

}  // namespace stc
