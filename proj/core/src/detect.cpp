#include "quasicomb/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "quasicomb/errors.hpp"

namespace quasicomb {

namespace {

using Dvec = std::vector<double>;

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

// Uniform hash grid over the cloud. Bucket collisions are harmless since
// every lookup checks distances.
class SpatialIndex {
 public:
  SpatialIndex(const std::vector<Dvec>& pts, double cell, double tol)
      : pts_(pts), cell_(cell), tol2_(tol * tol), dim_(pts.empty() ? 0 : static_cast<int>(pts[0].size())) {
    cells_.reserve(pts.size() * 2);
    std::vector<long long> c(static_cast<std::size_t>(dim_));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of(pts[i], c);
      cells_[hash(c)].push_back(static_cast<int>(i));
    }
  }

  int find(std::span<const double> q) const {
    std::vector<long long> c(static_cast<std::size_t>(dim_));
    cell_of(q, c);
    int best = -1;
    double best_d = tol2_;
    std::vector<long long> n(c);
    visit_neighbours(c, n, 0, [&](const std::vector<long long>& cell) {
      auto it = cells_.find(hash(cell));
      if (it == cells_.end()) return;
      for (int idx : it->second) {
        double d = dist2(pts_[static_cast<std::size_t>(idx)], q);
        if (d <= best_d) {
          best_d = d;
          best = idx;
        }
      }
    });
    return best;
  }

  void within(std::span<const double> q, double r, std::vector<int>& out) const {
    out.clear();
    std::vector<long long> lo(static_cast<std::size_t>(dim_));
    std::vector<long long> hi(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
      lo[i] = static_cast<long long>(std::floor((q[i] - r) / cell_));
      hi[i] = static_cast<long long>(std::floor((q[i] + r) / cell_));
    }
    std::vector<long long> c(lo);
    const double r2 = r * r;
    while (true) {
      auto it = cells_.find(hash(c));
      if (it != cells_.end())
        for (int idx : it->second)
          if (dist2(pts_[static_cast<std::size_t>(idx)], q) <= r2) out.push_back(idx);
      int pos = 0;
      while (pos < dim_ && ++c[pos] > hi[pos]) {
        c[pos] = lo[pos];
        ++pos;
      }
      if (pos == dim_) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

 private:
  void cell_of(std::span<const double> q, std::vector<long long>& c) const {
    for (int i = 0; i < dim_; ++i) c[i] = static_cast<long long>(std::floor(q[i] / cell_));
  }
  static std::uint64_t hash(const std::vector<long long>& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (long long v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return h;
  }
  template <class Fn>
  void visit_neighbours(const std::vector<long long>& c, std::vector<long long>& n, int axis,
                        Fn&& fn) const {
    if (axis == dim_) {
      fn(n);
      return;
    }
    for (long long o = -1; o <= 1; ++o) {
      n[axis] = c[axis] + o;
      visit_neighbours(c, n, axis + 1, fn);
    }
  }

  const std::vector<Dvec>& pts_;
  double cell_;
  double tol2_;
  int dim_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

Lattice numeric_lattice(const std::vector<Dvec>& cols) {
  const int d = static_cast<int>(cols.size());
  RMatrix b(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) b(i, j) = Real::numeric(cols[j][i]);
  return Lattice::canonicalize(b);
}

double det_abs_of(const std::vector<Dvec>& cols) {
  const int d = static_cast<int>(cols.size());
  if (d == 1) return std::fabs(cols[0][0]);
  if (d == 2) return std::fabs(cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0]);
  RMatrix b(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) b(i, j) = Real::numeric(cols[j][i]);
  return std::fabs(determinant(b).to_double());
}

struct Candidate {
  Coset coset;
  double det = 0;
  std::size_t score = 0;
};

class Fitter {
 public:
  Fitter(const PointCloud& cloud, double tol, const FitOptions& opt)
      : cloud_(cloud), tol_(tol), opt_(opt), d_(cloud.dim),
        spacing_(estimate_spacing(cloud)),
        index_(cloud.points, std::max(4.0 * tol, 0.5 * spacing_), tol) {
    centre_.resize(static_cast<std::size_t>(d_));
    double diag2 = 0.0;
    for (int i = 0; i < d_; ++i) {
      centre_[i] = 0.5 * (cloud.box_lo[i] + cloud.box_hi[i]);
      diag2 += (cloud.box_hi[i] - cloud.box_lo[i]) * (cloud.box_hi[i] - cloud.box_lo[i]);
    }
    half_diag_ = 0.5 * std::sqrt(diag2);
  }

  int find(std::span<const double> q) const { return index_.find(q); }

  bool inside(std::span<const double> q, double margin) const {
    for (int i = 0; i < d_; ++i)
      if (q[i] < cloud_.box_lo[i] + margin || q[i] > cloud_.box_hi[i] - margin) return false;
    return true;
  }

  // Visits coset points in the box inflated by tol; stops when fn returns false.
  template <class Fn>
  void for_each_in_box(const Coset& c, Fn&& fn) const {
    bool go = true;
    for_each_in_ball(c, centre_, half_diag_ + 2.0 * tol_ * std::sqrt(static_cast<double>(d_)) + tol_,
                     [&](std::span<const double> q) {
                       if (!go || !inside(q, -tol_)) return;
                       go = fn(q);
                     });
  }

  // p + L inside the tol-shrunk box must be entirely in the cloud.
  bool contained(const Coset& c, double local_radius) const {
    bool ok = true;
    // Cheap local check first, then the whole box.
    for_each_in_ball(c, anchor_, local_radius, [&](std::span<const double> q) {
      if (!ok || !inside(q, tol_)) return;
      if (find(q) < 0) ok = false;
    });
    if (!ok) return false;
    for_each_in_box(c, [&](std::span<const double> q) {
      if (inside(q, tol_) && find(q) < 0) ok = false;
      return ok;
    });
    return ok;
  }

  bool line_valid(const Dvec& p, const Dvec& v) const {
    Dvec x(p.size());
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      for (long n = 1;; ++n) {
        for (std::size_t i = 0; i < p.size(); ++i) x[i] = p[i] + sgn * static_cast<double>(n) * v[i];
        if (!inside(x, -tol_)) break;
        if (!inside(x, tol_)) continue;
        if (find(x) < 0) return false;
      }
    }
    return true;
  }

  std::optional<Candidate> best_through(std::size_t seed, const std::vector<char>& active) {
    const Dvec& p = cloud_.points[seed];
    anchor_ = p;
    std::vector<Dvec> valid = valid_vectors(p);
    if (static_cast<int>(valid.size()) < d_) return std::nullopt;

    // Independent d-tuples in order of total length.
    std::vector<std::vector<int>> combos;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(cur.size()) == d_) {
        combos.push_back(cur);
        return;
      }
      for (int i = start; i < static_cast<int>(valid.size()); ++i) {
        cur.push_back(i);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    auto length = [&](const std::vector<int>& c) {
      double s = 0.0;
      for (int i : c) s += std::sqrt(norm2(valid[static_cast<std::size_t>(i)]));
      return s;
    };
    std::stable_sort(combos.begin(), combos.end(),
                     [&](const auto& a, const auto& b) { return length(a) < length(b); });

    std::optional<Candidate> best;
    int successes = 0;
    int tried = 0;
    for (const auto& combo : combos) {
      if (successes >= 2 || tried >= 400) break;
      std::vector<Dvec> basis;
      double prod = 1.0;
      for (int i : combo) {
        basis.push_back(valid[static_cast<std::size_t>(i)]);
        prod *= std::sqrt(norm2(basis.back()));
      }
      if (det_abs_of(basis) < 1e-6 * prod) continue;
      ++tried;
      Coset c(numeric_lattice(basis), from_doubles(p));
      if (!contained(c, local_radius(basis))) continue;
      ++successes;
      refine(p, basis, valid);
      Candidate cand = finalize(p, basis, active);
      if (!best || better(cand, *best)) best = std::move(cand);
    }
    return best;
  }

  static bool better(const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (std::fabs(a.det - b.det) > 1e-9 * std::max(a.det, b.det)) return a.det > b.det;
    return lex_less(a.coset.lattice().basis().data, b.coset.lattice().basis().data);
  }

  std::size_t count_active(const Coset& c, const std::vector<char>& active) const {
    std::size_t n = 0;
    for_each_in_box(c, [&](std::span<const double> q) {
      int idx = find(q);
      if (idx >= 0 && active[static_cast<std::size_t>(idx)]) ++n;
      return true;
    });
    return n;
  }

  double tol() const { return tol_; }

 private:
  static double estimate_spacing(const PointCloud& c) {
    double vol = 1.0;
    bool degenerate = false;
    for (int i = 0; i < c.dim; ++i) {
      double w = c.box_hi[i] - c.box_lo[i];
      if (w <= 0) degenerate = true;
      vol *= w;
    }
    if (degenerate || c.points.empty()) return 1.0;
    return std::pow(vol / static_cast<double>(c.points.size()), 1.0 / c.dim);
  }

  double local_radius(const std::vector<Dvec>& basis) const {
    double m = 0.0;
    for (const auto& v : basis) m = std::max(m, std::sqrt(norm2(v)));
    return 3.0 * m;
  }

  std::vector<Dvec> valid_vectors(const Dvec& p) const {
    double rho = 3.0 * spacing_;
    const double max_rho = std::max(rho, half_diag_);
    std::vector<int> nbrs;
    while (true) {
      index_.within(p, rho, nbrs);
      std::vector<Dvec> valid;
      if (static_cast<int>(nbrs.size()) > opt_.neighbors || rho >= max_rho) {
        std::vector<Dvec> diffs;
        for (int idx : nbrs) {
          Dvec v(static_cast<std::size_t>(d_));
          for (int i = 0; i < d_; ++i) v[i] = cloud_.points[static_cast<std::size_t>(idx)][i] - p[i];
          if (norm2(v) <= tol_ * tol_) continue;
          // One representative of ±v.
          for (int i = 0; i < d_; ++i) {
            if (std::fabs(v[i]) <= tol_) continue;
            if (v[i] < 0)
              for (auto& x : v) x = -x;
            break;
          }
          diffs.push_back(std::move(v));
        }
        std::sort(diffs.begin(), diffs.end(), [](const Dvec& a, const Dvec& b) {
          double na = norm2(a), nb = norm2(b);
          if (na != nb) return na < nb;
          return a < b;
        });
        for (const auto& v : diffs) {
          bool dup = std::any_of(valid.begin(), valid.end(),
                                 [&](const Dvec& w) { return dist2(v, w) <= tol_ * tol_; });
          if (dup) continue;
          if (line_valid(p, v)) valid.push_back(v);
          if (static_cast<int>(valid.size()) >= opt_.max_candidates) break;
        }
        if (rank_of(valid) >= d_ || rho >= max_rho) return valid;
      }
      rho = std::min(max_rho, rho * 1.5);
    }
  }

  int rank_of(const std::vector<Dvec>& vs) const {
    // Gram-Schmidt rank with a relative threshold.
    std::vector<Dvec> q;
    for (const auto& v : vs) {
      Dvec w = v;
      for (const auto& u : q) {
        double c = 0.0;
        for (int i = 0; i < d_; ++i) c += w[i] * u[i];
        for (int i = 0; i < d_; ++i) w[i] -= c * u[i];
      }
      double n = std::sqrt(norm2(w));
      if (n > 1e-6 * std::sqrt(norm2(v))) {
        for (auto& x : w) x /= n;
        q.push_back(std::move(w));
        if (static_cast<int>(q.size()) == d_) break;
      }
    }
    return static_cast<int>(q.size());
  }

  // Adds valid vectors with small-denominator coordinates while the coset
  // stays inside the cloud.
  void refine(const Dvec& p, std::vector<Dvec>& basis, const std::vector<Dvec>& valid) {
    bool changed = true;
    while (changed) {
      changed = false;
      RMatrix b(d_, d_);
      for (int j = 0; j < d_; ++j)
        for (int i = 0; i < d_; ++i) b(i, j) = Real::numeric(basis[j][i]);
      RMatrix binv = inverse(b);
      for (const auto& v : valid) {
        Vec y = binv.apply(from_doubles(v));
        bool integral = true;
        Vec ry(static_cast<std::size_t>(d_));
        bool rational = true;
        for (int i = 0; i < d_; ++i) {
          double yi = y[i].to_double();
          if (std::fabs(yi - std::round(yi)) > 1e-6) integral = false;
          auto q = rationalize(yi, opt_.max_denominator, 1e-6);
          if (!q) {
            rational = false;
            break;
          }
          ry[i] = Real(*q);
        }
        if (integral || !rational) continue;
        RMatrix gens(d_, d_ + 1);
        for (int i = 0; i < d_; ++i) {
          gens(i, i) = Real(1);
          gens(i, d_) = ry[i];
        }
        Lattice h = Lattice::from_generators(gens);
        std::vector<Dvec> next(static_cast<std::size_t>(d_), Dvec(static_cast<std::size_t>(d_), 0.0));
        for (int j = 0; j < d_; ++j)
          for (int i = 0; i < d_; ++i) {
            double s = 0.0;
            for (int k = 0; k < d_; ++k) s += basis[k][i] * h.basis()(k, j).to_double();
            next[j][i] = s;
          }
        Coset c(numeric_lattice(next), from_doubles(p));
        if (!contained(c, local_radius(next))) continue;
        basis = std::move(next);
        changed = true;
        break;
      }
    }
  }

  Candidate finalize(const Dvec& p, const std::vector<Dvec>& basis, const std::vector<char>& active) {
    // Rational reconstruction of the lattice and, separately, of the offset.
    RMatrix exact(d_, d_);
    bool lattice_rational = true;
    for (int j = 0; j < d_ && lattice_rational; ++j)
      for (int i = 0; i < d_; ++i) {
        double x = basis[j][i];
        auto q = rationalize(x, opt_.max_denominator, 1e-9 * std::max(1.0, std::fabs(x)));
        if (!q) {
          lattice_rational = false;
          break;
        }
        exact(i, j) = Real(*q);
      }
    Vec offset(static_cast<std::size_t>(d_));
    bool offset_rational = true;
    for (int i = 0; i < d_; ++i) {
      auto q = rationalize(p[i], opt_.max_denominator, 1e-9 * std::max(1.0, std::fabs(p[i])));
      if (!q) {
        offset_rational = false;
        break;
      }
      offset[i] = Real(*q);
    }
    if (!offset_rational) offset = from_doubles(p);
    Lattice lat = numeric_lattice(basis);
    if (lattice_rational) {
      try {
        lat = Lattice::canonicalize(exact);
      } catch (const SingularBasis&) {
        // Rounding collapsed the basis; keep the numeric one.
      }
    }
    Candidate c{Coset(lat, offset), det_abs_of(basis), 0};
    c.score = count_active(c.coset, active);
    return c;
  }

  const PointCloud& cloud_;
  double tol_;
  FitOptions opt_;
  int d_;
  double spacing_;
  SpatialIndex index_;
  std::vector<double> centre_;
  double half_diag_ = 0;
  Dvec anchor_;
};

FitReport residuals(const Fitter& fitter, const PointCloud& cloud, const std::vector<Coset>& cosets,
                    std::vector<std::vector<int>>* members) {
  FitReport rep;
  std::vector<int> count(cloud.points.size(), 0);
  if (members) members->assign(cosets.size(), {});
  for (std::size_t j = 0; j < cosets.size(); ++j) {
    fitter.for_each_in_box(cosets[j], [&](std::span<const double> q) {
      int idx = fitter.find(q);
      if (idx >= 0) {
        ++count[static_cast<std::size_t>(idx)];
        if (members) (*members)[j].push_back(idx);
      } else if (fitter.inside(q, fitter.tol())) {
        rep.overcover.emplace_back(q.begin(), q.end());
      }
      return true;
    });
  }
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (count[i] == 0) rep.uncovered.push_back(cloud.points[i]);
    if (count[i] >= 2) rep.double_covered.push_back(cloud.points[i]);
  }
  std::sort(rep.overcover.begin(), rep.overcover.end());
  rep.overcover.erase(std::unique(rep.overcover.begin(), rep.overcover.end()), rep.overcover.end());
  rep.ok = rep.uncovered.empty() && rep.overcover.empty();
  return rep;
}

}  // namespace

PointCloud PointCloud::from_points(std::vector<std::vector<double>> points,
                                   std::vector<Complex> amplitudes, std::vector<double> box_lo,
                                   std::vector<double> box_hi) {
  if (points.empty()) throw TooFewPoints("point cloud is empty");
  PointCloud c;
  c.dim = static_cast<int>(points.front().size());
  if (c.dim <= 0) throw std::invalid_argument("point cloud: points need at least one coordinate");
  for (const auto& p : points) check_dim(c.dim, static_cast<int>(p.size()), "point cloud");
  if (!amplitudes.empty() && amplitudes.size() != points.size())
    throw std::invalid_argument("point cloud: amplitude count differs from point count");
  if (box_lo.empty()) {
    box_lo = points.front();
    box_hi = points.front();
    for (const auto& p : points)
      for (int i = 0; i < c.dim; ++i) {
        box_lo[i] = std::min(box_lo[i], p[i]);
        box_hi[i] = std::max(box_hi[i], p[i]);
      }
  }
  check_dim(c.dim, static_cast<int>(box_lo.size()), "point cloud box");
  check_dim(c.dim, static_cast<int>(box_hi.size()), "point cloud box");
  // Distinctness at 1e-9.
  SpatialIndex idx(points, 1.0, 1e-9);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (idx.find(points[i]) != static_cast<int>(i))
      throw std::invalid_argument("point cloud: duplicate point " + std::to_string(i));
  c.points = std::move(points);
  c.amplitudes = std::move(amplitudes);
  c.box_lo = std::move(box_lo);
  c.box_hi = std::move(box_hi);
  return c;
}

PointCloud read_point_cloud_csv(std::istream& in, std::optional<int> dim) {
  std::vector<std::vector<double>> pts;
  std::vector<Complex> amps;
  std::string line;
  bool first = true;
  std::vector<int> coord_cols;
  int re_col = -1;
  int im_col = -1;
  std::size_t line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) {
      auto b = cell.find_first_not_of(" \t\r");
      auto e = cell.find_last_not_of(" \t\r");
      out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
  };
  auto parse = [&](const std::string& s, double& v) {
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return !s.empty() && end == s.c_str() + s.size();
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto cells = split(line);
    if (first) {
      first = false;
      double tmp;
      bool header = std::any_of(cells.begin(), cells.end(), [&](const std::string& s) { return !parse(s, tmp); });
      if (header) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          std::string n = cells[i];
          std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return std::tolower(ch); });
          if (n == "re" || n == "amp_re") re_col = static_cast<int>(i);
          else if (n == "im" || n == "amp_im") im_col = static_cast<int>(i);
          else coord_cols.push_back(static_cast<int>(i));
        }
        if ((re_col < 0) != (im_col < 0)) throw ParseError("CSV header needs both re and im columns");
        continue;
      }
      int ncols = static_cast<int>(cells.size());
      int d = dim.value_or(ncols);
      if (d <= 0 || (ncols != d && ncols != d + 2))
        throw ParseError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(d) +
                         " or " + std::to_string(d + 2) + " columns");
      for (int i = 0; i < d; ++i) coord_cols.push_back(i);
      if (ncols == d + 2) {
        re_col = d;
        im_col = d + 1;
      }
    }
    std::size_t want = coord_cols.size() + (re_col >= 0 ? 2 : 0);
    if (cells.size() != want)
      throw ParseError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(want) +
                       " columns, got " + std::to_string(cells.size()));
    std::vector<double> p;
    for (int c : coord_cols) {
      double v;
      if (!parse(cells[static_cast<std::size_t>(c)], v))
        throw ParseError("CSV line " + std::to_string(line_no) + ": bad number '" + cells[static_cast<std::size_t>(c)] + "'");
      p.push_back(v);
    }
    if (re_col >= 0) {
      double re, im;
      if (!parse(cells[static_cast<std::size_t>(re_col)], re) || !parse(cells[static_cast<std::size_t>(im_col)], im))
        throw ParseError("CSV line " + std::to_string(line_no) + ": bad amplitude");
      amps.emplace_back(re, im);
    }
    pts.push_back(std::move(p));
  }
  if (pts.empty()) throw ParseError("CSV input holds no points");
  return PointCloud::from_points(std::move(pts), std::move(amps));
}

std::optional<mpq_class> rationalize(double x, long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents h/k of the continued fraction of x.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(r);
    if (std::fabs(a) > 9e15) break;
    long long ai = static_cast<long long>(a);
    long long h2 = ai * h1 + h0;
    long long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::fabs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) {
      mpq_class q(static_cast<long>(h1), static_cast<unsigned long>(k1));
      q.canonicalize();
      return q;
    }
    double frac = r - a;
    if (frac <= 0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

CosetFit fit_cosets(const PointCloud& cloud, int max_J, double dist_tol, const FitOptions& options) {
  if (cloud.points.empty()) throw TooFewPoints("fit_cosets: empty cloud");
  if (max_J < 1) throw std::invalid_argument("fit_cosets: max_J must be >= 1");
  if (!(dist_tol > 0)) throw std::invalid_argument("fit_cosets: dist_tol must be positive");
  Fitter fitter(cloud, dist_tol, options);
  const std::size_t n = cloud.points.size();
  std::vector<char> active(n, 1);
  std::vector<Coset> chosen;

  std::vector<double> centre(static_cast<std::size_t>(cloud.dim));
  for (int i = 0; i < cloud.dim; ++i) centre[i] = 0.5 * (cloud.box_lo[i] + cloud.box_hi[i]);

  for (int round = 0; round < max_J; ++round) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i]) order.push_back(i);
    if (order.empty()) break;
    std::size_t nseeds = std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(1, options.seeds)));
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(nseeds), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        double da = dist2(cloud.points[a], centre), db = dist2(cloud.points[b], centre);
                        if (da != db) return da < db;
                        return cloud.points[a] < cloud.points[b];
                      });
    std::optional<Candidate> best;
    std::vector<Coset> tried;
    for (std::size_t s = 0; s < nseeds; ++s) {
      const auto& p = cloud.points[order[s]];
      Point pp = from_doubles(p);
      // A seed inside an earlier candidate of this round would rebuild it.
      if (std::any_of(tried.begin(), tried.end(), [&](const Coset& c) { return c.contains(pp, 1e-6); }))
        continue;
      auto cand = fitter.best_through(order[s], active);
      if (!cand) continue;
      tried.push_back(cand->coset);
      if (!best || Fitter::better(*cand, *best)) best = std::move(cand);
    }
    if (!best || best->score < 2) {
      if (chosen.empty()) throw NoFit("no lattice coset through two or more cloud points fits the data");
      break;
    }
    fitter.for_each_in_box(best->coset, [&](std::span<const double> q) {
      int idx = fitter.find(q);
      if (idx >= 0) active[static_cast<std::size_t>(idx)] = 0;
      return true;
    });
    chosen.push_back(best->coset);
  }

  CosetFit fit;
  fit.cosets = chosen;
  std::vector<std::vector<int>> members;
  FitReport rep = residuals(fitter, cloud, chosen, &members);
  fit.uncovered = std::move(rep.uncovered);
  fit.overcover = std::move(rep.overcover);
  fit.double_covered = std::move(rep.double_covered);
  for (const auto& m : members) {
    fit.coverage.push_back(m.size());
    if (cloud.amplitudes.empty()) continue;
    AmplitudeSummary s;
    s.count = m.size();
    bool first = true;
    for (int idx : m) {
      Complex a = cloud.amplitudes[static_cast<std::size_t>(idx)];
      s.mean += a;
      double r = std::abs(a);
      s.min_abs = first ? r : std::min(s.min_abs, r);
      s.max_abs = first ? r : std::max(s.max_abs, r);
      first = false;
    }
    if (s.count > 0) s.mean /= static_cast<double>(s.count);
    fit.amplitudes.push_back(s);
  }
  return fit;
}

FitReport verify_fit(const PointCloud& cloud, const CosetFit& fit, double dist_tol) {
  if (!(dist_tol > 0)) throw std::invalid_argument("verify_fit: dist_tol must be positive");
  Fitter fitter(cloud, dist_tol, FitOptions{});
  return residuals(fitter, cloud, fit.cosets, nullptr);
}

}  // namespace quasicomb
