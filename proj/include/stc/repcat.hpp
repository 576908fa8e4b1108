#pragma once

#include <optional>
#include <vector>

#include "stc/group.hpp"
#include "stc/numkernel.hpp"

namespace stc {

// Finite-dimensional unitary representation of a catalog's (super)group.
// The carrier is C^dim; matrices are indexed by group element.
struct RepObject {
  CatalogPtr cat;
  int dim = 0;
  std::vector<Mat> matrices;

  const Mat& at(int g) const { return matrices[g]; }
  bool same_group(const RepObject& o) const { return cat.get() == o.cat.get(); }
};

RepObject rep_from_irrep(const CatalogPtr& cat, int irrep_index);
RepObject unit_object(const CatalogPtr& cat);   // trivial 1-dim
RepObject zero_object(const CatalogPtr& cat);   // 0-dim carrier
RepObject regular_rep(const CatalogPtr& cat);   // left translation on functions

// Intertwiner between two representations. mat is dst.dim x src.dim.
struct Morphism {
  RepObject src;
  RepObject dst;
  Mat mat;
};

Morphism make_morphism(const RepObject& src, const RepObject& dst, Mat m);
bool is_morphism(const Morphism& f, const Tolerance& tol = {});
Morphism identity_mor(const RepObject& x);
Morphism compose(const Morphism& g, const Morphism& f);  // g after f
Morphism adjoint(const Morphism& f);
Morphism tensor_mor(const Morphism& s, const Morphism& t);

enum class SymmetryKind { plain, super };

struct ConjugateSolution {
  RepObject xbar;
  Morphism r;     // unit -> xbar (x) x
  Morphism rbar;  // unit -> x (x) xbar
  bool standard = false;
};

// Orthonormal (Hilbert-Schmidt) basis of Hom(x, y). Throws GroupMismatch.
std::vector<Morphism> hom_basis(const RepObject& x, const RepObject& y,
                                const Tolerance& tol = {});

RepObject tensor_obj(const RepObject& x, const RepObject& y);

struct DirectSum {
  RepObject obj;
  Morphism iso_u;  // x -> obj, isometry
  Morphism iso_v;  // y -> obj, isometry
};
DirectSum direct_sum(const RepObject& x, const RepObject& y);

struct Subobject {
  RepObject obj;
  Morphism v;  // obj -> x, isometry with v v* = p
};
// p must be a projection in End(x) and an intertwiner.
Subobject subobject(const RepObject& x, const Mat& p, const Tolerance& tol = {});

struct IrrepComponent {
  int irrep_index;
  int multiplicity;
  std::vector<Morphism> isometries;  // one per copy, irrep -> x
};
std::vector<IrrepComponent> irrep_decompose(const RepObject& x, const Tolerance& tol = {});

// Standard solution of the conjugate equations, assembled block-per-irrep.
ConjugateSolution conjugate(const RepObject& x, const Tolerance& tol = {});

// Standard solution for x (x) y with carrier ybar (x) xbar.
ConjugateSolution conjugate_tensor(const RepObject& x, const RepObject& y,
                                   const ConjugateSolution& cx, const ConjugateSolution& cy);

double conjugate_equations_residual(const RepObject& x, const ConjugateSolution& c);
double standardness_residual(const RepObject& x, const ConjugateSolution& c,
                             const Tolerance& tol = {});

Complex trace_morphism(const Morphism& a, const ConjugateSolution& c);
double dimension(const RepObject& x);

// Braiding morphism x (x) y -> y (x) x. Super kind uses the grading by k.
Morphism symmetry(const RepObject& x, const RepObject& y, SymmetryKind kind);

// Grading operator pi_x(k); identity for catalogs without k.
Mat grading_operator(const RepObject& x);

// Object with entrywise-conjugated matrices (the carrier of conjugate(x)).
RepObject conjugate_object(const RepObject& x);

// Canonical twist endomorphism of x built from a standard conjugate and the
// braiding; equals the grading operator in the super case.
Morphism twist(const RepObject& x, SymmetryKind kind, const Tolerance& tol = {});

}  // namespace stc
