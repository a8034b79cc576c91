#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "quasicomb/errors.hpp"
#include "quasicomb/intmat.hpp"
#include "quasicomb/real.hpp"

namespace quasicomb {

/// A discrete subgroup of R^d, stored as a dim x rank basis whose columns
/// generate it.
///
/// Exact lattices (rational generators) are kept in canonical column Hermite
/// normal form: lower echelon, positive pivots, entries left of each pivot
/// reduced into [0, pivot). Two exact lattices are equal iff their stored
/// bases are identical. Numeric lattices hold a double basis as given and
/// only support enumeration, duality and Fourier work.
///
/// Full rank is the normal case. Lower-rank values exist so that rank
/// deficient intersections and coset-ring residues have a home.
class Lattice {
 public:
  /// Canonical lattice generated by the columns of an invertible square basis.
  /// Numeric entries produce a numeric lattice. Throws SingularBasis.
  static Lattice canonicalize(const RMatrix& raw_basis);
  /// Subgroup generated by arbitrary exact generator columns (any rank).
  static Lattice from_generators(const RMatrix& generators);
  static Lattice integer(int dim);
  static Lattice diagonal(const std::vector<Real>& diag);

  int dim() const { return dim_; }
  int rank() const { return basis_.cols; }
  bool is_full_rank() const { return rank() == dim_; }
  bool is_exact() const { return exact_; }
  const RMatrix& basis() const { return basis_; }
  /// Row index of each column's pivot; empty for numeric lattices.
  const std::vector<int>& pivot_rows() const { return pivots_; }
  /// |det basis|; requires full rank.
  Real det_abs() const;

  /// Lowest common denominator of the exact basis (basis * denom is integral).
  const mpz_class& denominator() const { return denom_; }
  /// Integer HNF of basis * denominator(); exact lattices only.
  const ColumnHnf& integer_hnf() const { return ihnf_; }

  friend bool operator==(const Lattice& a, const Lattice& b);

 private:
  Lattice() = default;
  static Lattice from_integer_hnf(int dim, ColumnHnf h, const mpz_class& scale);
  static Lattice numeric_full_rank(const RMatrix& basis);

  int dim_ = 0;
  RMatrix basis_;
  std::vector<int> pivots_;
  bool exact_ = true;
  Real det_abs_;
  mpz_class denom_ = 1;
  ColumnHnf ihnf_;
};

/// Carries the rank and basis of the (lower-rank) intersection subgroup.
class RankDeficientIntersection : public Error {
 public:
  explicit RankDeficientIntersection(Lattice subgroup);
  const Lattice& subgroup() const { return subgroup_; }
  int rank() const { return subgroup_.rank(); }

 private:
  Lattice subgroup_;
};

/// Dual lattice {y : <x, y> in Z for all x in L}; requires full rank.
Lattice dual(const Lattice& lattice);

/// L1 ∩ L2 when full rank; throws RankDeficientIntersection otherwise.
/// Exact lattices only (NumericModeUnsupported).
Lattice intersect(const Lattice& a, const Lattice& b);
/// Intersection of exact subgroups of any rank.
Lattice intersect_subgroups(const Lattice& a, const Lattice& b);
/// Subgroup generated by a and b (exact only).
Lattice subgroup_sum(const Lattice& a, const Lattice& b);

/// [L : sub] for sub ⊆ L of equal rank. Throws NotASublattice.
mpz_class index_in(const Lattice& sub, const Lattice& lattice);

/// Integer coordinates of v in the stored basis, or nullopt if v ∉ L.
/// Exact lattices only.
std::optional<std::vector<mpz_class>> coordinates(const Lattice& lattice,
                                                  std::span<const Real> v);
/// Membership of a vector; numeric inputs are tested with tolerance `tol`
/// on the basis coordinates.
bool contains_vector(const Lattice& lattice, std::span<const Real> v, double tol = 1e-9);

/// Representatives of L / sub (sub ⊆ L, same rank), in the canonical box
/// 0 <= y_i < h_ii of the coordinate HNF.
std::vector<Vec> coset_representatives(const Lattice& lattice, const Lattice& sub);

/// Representative of v modulo L inside the half-open fundamental parallelepiped
/// of the HNF basis (0 <= v[pivot_j] < h_j).
Vec reduce_offset(const Lattice& lattice, std::span<const Real> v);
/// Representative of v modulo L with each basis coordinate in [-1/2, 1/2).
Vec reduce_centered(const Lattice& lattice, std::span<const Real> v);

/// A translate offset + L of a lattice, with the offset reduced to its
/// canonical representative.
class Coset {
 public:
  Coset(Lattice lattice, Vec offset);
  explicit Coset(Lattice lattice);

  const Lattice& lattice() const { return lattice_; }
  const Vec& offset() const { return offset_; }
  int dim() const { return lattice_.dim(); }
  bool is_exact() const { return lattice_.is_exact() && quasicomb::is_exact(offset_); }

  /// True iff p - offset ∈ L. Exact when both sides are exact; otherwise
  /// tolerance-based on basis coordinates. Throws DimensionMismatch.
  bool contains(const Point& p, double tol = 1e-9) const;

  friend bool operator==(const Coset& a, const Coset& b);

 private:
  Lattice lattice_;
  Vec offset_;
};

/// Exact coset intersection (a coset of L1 ∩ L2), or nullopt when empty.
std::optional<Coset> intersect(const Coset& a, const Coset& b);
/// Structural near-equality (numeric offsets compared with tolerance).
bool near(const Coset& a, const Coset& b, double tol = 1e-9);
/// Total order used to sort supports canonically.
bool coset_less(const Coset& a, const Coset& b);

/// Coset points p with |p - center| <= radius in lexicographic order.
/// Exact cosets with exact centers are filtered exactly.
std::vector<Point> enumerate_in_ball(const Coset& coset, const Point& center, double radius);

/// Callback form used by the numerics: visits every coset point within
/// `radius` of `center` (a hair of slack allowed), in double precision.
void for_each_in_ball(const Coset& coset, std::span<const double> center, double radius,
                      const std::function<void(std::span<const double>)>& visit);

/// Upper bound on the covering radius: half the sum of LLL-reduced basis lengths.
double covering_radius_bound(const Lattice& lattice);

/// Minimum pairwise distance η of a finite point list. Throws TooFewPoints.
double separating_constant(const std::vector<Point>& points);
double separating_constant(const std::vector<std::vector<double>>& points);

/// max over a grid of centres (pitch `pitch`) inside the points' bounding box
/// of the number of points in the closed unit ball around the centre.
int bounded_density_count(const std::vector<Point>& points, double pitch = 0.25);

}  // namespace quasicomb
