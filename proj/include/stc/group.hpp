#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stc/numkernel.hpp"

namespace stc {

// Finite group as a validated multiplication table over 0..order-1.
struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> mul;
  int identity = 0;
  std::vector<int> inv;
  std::vector<std::string> labels;

  int op(int a, int b) const { return mul[a][b]; }
};

// Validates associativity, identity, inverses. Throws NotAssociative,
// NoIdentity, NoInverse, BadInput.
FiniteGroup validate_group(const std::vector<std::vector<int>>& mul,
                           std::vector<std::string> labels = {});

// Unitary irreducible representation stored as one matrix per element.
struct Irrep {
  int dim = 0;
  std::vector<Mat> matrices;
  std::string name;
};

// Group with an optional distinguished central involution k (index into the
// element list, or -1 for the purely even case).
struct SuperGroup {
  FiniteGroup group;
  int k = -1;
  bool has_k() const { return k >= 0; }
};

struct Catalog {
  SuperGroup sg;
  std::vector<Irrep> irreps;
  std::string name;
};
using CatalogPtr = std::shared_ptr<const Catalog>;

// Built-in families: Z2, Z3, Z4, ... (any Zn), S3, S4, D4, Q8, Z2k.
// Throws UnknownFamily.
CatalogPtr builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Uniform average (1/|G|) sum_g f(g). Throws ShapeMismatch.
Mat haar_average(const FiniteGroup& g, const std::function<Mat(int)>& f);
Mat haar_average(const FiniteGroup& g, const std::vector<Mat>& f);

std::vector<int> center(const FiniteGroup& g);
std::vector<std::vector<int>> conjugacy_classes(const FiniteGroup& g);

// Homomorphism + unitarity + irreducibility checks; throws on failure.
void validate_irrep(const FiniteGroup& g, const Irrep& ir, const Tolerance& tol = {});

Vec character(const Irrep& ir);

// Full catalog validation: irrep axioms, sum of squares, character
// orthogonality, centrality of k.
void validate_catalog(const Catalog& cat, const Tolerance& tol = {});

// JSON group/catalog loading per the documented format:
// {"order": n, "mul": [[..]], "labels": [..], "k": idx,
//  "irreps": [{"dim": d, "matrices": [[[ [re,im], .. ], ..], ..]}, ..]}
// Irreps are optional; when absent only the group is returned.
CatalogPtr catalog_from_json(const std::string& text);
std::string catalog_to_json(const Catalog& cat);

}  // namespace stc
