#pragma once

#include <utility>
#include <vector>

#include "quasicomb/lattice.hpp"

namespace quasicomb {

/// Finite set expression over lattice cosets: union, difference and
/// intersection nodes over Coset leaves of one ambient dimension.
///
/// Difference is n-ary: diff(A, B1, ..., Bn) = A \ (B1 ∪ ... ∪ Bn).
/// Leaves are normally full-rank; lower-rank leaves are accepted and end up
/// in the residue of a normalization.
class CosetExpression {
 public:
  enum class Op { Leaf, Union, Difference, Intersection };

  static CosetExpression leaf(Coset coset);
  static CosetExpression make(Op op, std::vector<CosetExpression> args);
  static CosetExpression set_union(std::vector<CosetExpression> args) {
    return make(Op::Union, std::move(args));
  }
  static CosetExpression difference(CosetExpression a, std::vector<CosetExpression> removed);
  static CosetExpression intersection(std::vector<CosetExpression> args) {
    return make(Op::Intersection, std::move(args));
  }

  Op op() const { return op_; }
  int dim() const { return dim_; }
  /// Leaf coset; only valid for Op::Leaf.
  const Coset& coset() const { return leaf_.front(); }
  const std::vector<CosetExpression>& args() const { return args_; }

  /// Distinct leaf cosets in first-seen order.
  std::vector<Coset> leaves() const;

 private:
  CosetExpression() = default;
  Op op_ = Op::Leaf;
  int dim_ = 0;
  std::vector<Coset> leaf_;
  std::vector<CosetExpression> args_;
};

/// Direct evaluation by leaf containment. Throws DimensionMismatch.
bool membership(const CosetExpression& expr, const Point& p);

/// A signed lower-rank coset in a normalization residue.
struct ResidueEntry {
  Coset coset;
  long multiplicity;
};

/// Disjoint full-rank cosets plus a signed lower-rank residue. The
/// expression's indicator equals
///   #{full-rank cosets containing p} + Σ multiplicity * [p ∈ residue coset]
/// at every point p.
struct NormalizedSystem {
  int dim = 0;
  std::vector<Coset> full_rank_cosets;
  std::vector<ResidueEntry> residue;

  long indicator(const Point& p) const;
};

/// Rewrites the expression over a common refinement (the intersection of all
/// full-rank leaf lattices) and merges complete refinement classes back into
/// cosets of the leaf lattices, coarsest lattice first. Throws
/// IncommensurableLeaves for numeric leaves.
NormalizedSystem normalize(const CosetExpression& expr);

/// Signed integer combination of cosets with Σ c [coset] equal to the
/// expression's indicator, from [A ∪ B] = [A] + [B] - [A ∩ B] and
/// [A \ B] = [A] - [A ∩ B]. Equal cosets are merged, zero terms dropped.
std::vector<std::pair<Coset, long>> comb_coefficients(const CosetExpression& expr);

}  // namespace quasicomb
