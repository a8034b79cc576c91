#pragma once

#include <complex>
#include <istream>
#include <optional>
#include <vector>

#include "quasicomb/lattice.hpp"
#include "quasicomb/wfunction.hpp"

namespace quasicomb {

/// Finite window of a point set, optionally carrying complex amplitudes.
struct PointCloud {
  int dim = 0;
  std::vector<std::vector<double>> points;
  std::vector<Complex> amplitudes;  ///< empty, or one per point
  std::vector<double> box_lo;
  std::vector<double> box_hi;

  /// Uses the bounding box of the points unless a box is given. Throws
  /// TooFewPoints on an empty list and std::invalid_argument on duplicate
  /// points (closer than 1e-9).
  static PointCloud from_points(std::vector<std::vector<double>> points,
                                std::vector<Complex> amplitudes = {},
                                std::vector<double> box_lo = {}, std::vector<double> box_hi = {});
};

/// CSV: one point per line, coordinates then optional amplitude re,im.
/// An optional header row names the columns; columns called "re"/"im" (or
/// "amp_re"/"amp_im") are amplitudes. Without a header every column is a
/// coordinate unless `dim` says otherwise. Lines starting with '#' are skipped.
PointCloud read_point_cloud_csv(std::istream& in, std::optional<int> dim = std::nullopt);

struct AmplitudeSummary {
  std::size_t count = 0;
  Complex mean = 0.0;
  double min_abs = 0;
  double max_abs = 0;
};

struct CosetFit {
  std::vector<Coset> cosets;
  std::vector<std::size_t> coverage;  ///< cloud points in each coset
  std::vector<std::vector<double>> uncovered;
  std::vector<std::vector<double>> overcover;       ///< coset points in the box missing from the cloud
  std::vector<std::vector<double>> double_covered;  ///< cloud points lying in two or more cosets
  std::vector<AmplitudeSummary> amplitudes;         ///< per coset, when the cloud has amplitudes

  int J() const { return static_cast<int>(cosets.size()); }
};

struct FitOptions {
  int seeds = 6;            ///< seed points tried per greedy round
  int neighbors = 24;       ///< minimum neighbourhood size for difference vectors
  int max_candidates = 16;  ///< shortest valid difference vectors kept per seed
  long max_denominator = 64;  ///< rational reconstruction of bases and offsets
};

/// Greedy cover of the cloud by lattice cosets contained in it.
///
/// Each round seeds from uncovered points near the box centre, collects
/// difference vectors v whose whole line p + Zv inside the box lies in the
/// cloud, assembles the shortest independent ones into a lattice with
/// p + L contained in the cloud, and enlarges it by further valid vectors.
/// The coset covering the most uncovered points wins; ties go to the larger
/// determinant, then the lexicographically smaller basis. Points within
/// dist_tol of the box boundary are not required to be present.
/// Throws NoFit when no coset through at least two points exists.
CosetFit fit_cosets(const PointCloud& cloud, int max_J, double dist_tol,
                    const FitOptions& options = {});

struct FitReport {
  bool ok = false;  ///< no uncovered points and no overcover
  std::vector<std::vector<double>> uncovered;
  std::vector<std::vector<double>> overcover;
  std::vector<std::vector<double>> double_covered;
};

/// Recomputes the residual lists of a fit from scratch.
FitReport verify_fit(const PointCloud& cloud, const CosetFit& fit, double dist_tol);

/// Continued-fraction reconstruction p/q with q <= max_den and
/// |x - p/q| <= tol, if one exists.
std::optional<mpq_class> rationalize(double x, long max_den, double tol);

}  // namespace quasicomb
