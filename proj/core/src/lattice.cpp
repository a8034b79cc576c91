#include "quasicomb/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace quasicomb {

namespace {

mpz_class lcm_denominators(std::span<const Real> values) {
  mpz_class l = 1;
  for (const auto& v : values) {
    const mpz_class& den = v.rational().get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
  }
  return l;
}

IMatrix scaled_integer(const RMatrix& m, const mpz_class& scale) {
  IMatrix out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      mpq_class q = m(i, j).rational() * scale;
      if (q.get_den() != 1) throw std::logic_error("scaled_integer: non-integral entry");
      out(i, j) = q.get_num();
    }
  return out;
}

std::vector<mpz_class> scaled_integer(std::span<const Real> v, const mpz_class& scale,
                                      bool& integral) {
  std::vector<mpz_class> out;
  out.reserve(v.size());
  integral = true;
  for (const auto& x : v) {
    mpq_class q = x.rational() * scale;
    q.canonicalize();
    if (q.get_den() != 1) {
      integral = false;
      return {};
    }
    out.push_back(q.get_num());
  }
  return out;
}

RMatrix hcat(const RMatrix& a, const RMatrix& b) {
  RMatrix out(a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
    for (int j = 0; j < b.cols; ++j) out(i, a.cols + j) = b(i, j);
  }
  return out;
}

void require_exact(const Lattice& l, const char* what) {
  if (!l.is_exact())
    throw NumericModeUnsupported(std::string(what) + " requires an exact (rational) lattice");
}

// Solves for coordinates of v in the basis in double precision. For exact
// lattices uses forward substitution on the pivot rows; for numeric ones the
// full inverse. Returns false if the residual is not within tolerance.
bool approx_coordinates(const Lattice& l, std::span<const Real> v, std::vector<double>& x) {
  const int r = l.rank();
  const RMatrix& b = l.basis();
  x.assign(static_cast<std::size_t>(r), 0.0);
  if (l.is_exact()) {
    for (int j = 0; j < r; ++j) {
      int row = l.pivot_rows()[j];
      double rest = v[row].to_double();
      for (int c = 0; c < j; ++c) rest -= b(row, c).to_double() * x[c];
      x[j] = rest / b(row, j).to_double();
    }
  } else {
    RMatrix inv = inverse(b);
    for (int i = 0; i < r; ++i) {
      double s = 0.0;
      for (int j = 0; j < l.dim(); ++j) s += inv(i, j).to_double() * v[j].to_double();
      x[i] = s;
    }
  }
  return true;
}

}  // namespace

Lattice Lattice::from_integer_hnf(int dim, ColumnHnf h, const mpz_class& scale) {
  Lattice l;
  l.dim_ = dim;
  l.exact_ = true;
  l.basis_ = RMatrix(dim, h.rank());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < h.rank(); ++j) l.basis_(i, j) = Real(mpq_class(h.basis(i, j), scale));
  l.pivots_ = h.pivot_rows;
  l.denom_ = lcm_denominators(l.basis_.data);
  l.ihnf_.basis = scaled_integer(l.basis_, l.denom_);
  l.ihnf_.pivot_rows = l.pivots_;
  if (l.is_full_rank()) {
    mpq_class det = 1;
    for (int j = 0; j < dim; ++j) det *= l.basis_(l.pivots_[j], j).rational();
    l.det_abs_ = Real(det);
  }
  return l;
}

Lattice Lattice::numeric_full_rank(const RMatrix& basis) {
  Lattice l;
  l.dim_ = basis.rows;
  l.exact_ = false;
  l.basis_ = RMatrix(basis.rows, basis.cols);
  for (std::size_t i = 0; i < basis.data.size(); ++i)
    l.basis_.data[i] = Real::numeric(basis.data[i].to_double());
  Real det = determinant(l.basis_);
  if (det.is_zero() || !std::isfinite(det.to_double()))
    throw SingularBasis("numeric lattice basis is singular");
  l.det_abs_ = det.abs();
  return l;
}

Lattice Lattice::canonicalize(const RMatrix& raw) {
  if (raw.rows != raw.cols || raw.rows == 0)
    throw SingularBasis("lattice basis must be a non-empty square matrix");
  if (!raw.is_exact()) return numeric_full_rank(raw);
  mpz_class scale = lcm_denominators(raw.data);
  ColumnHnf h = column_hnf(scaled_integer(raw, scale));
  if (h.rank() < raw.rows) throw SingularBasis("lattice basis is singular (det = 0)");
  return from_integer_hnf(raw.rows, std::move(h), scale);
}

Lattice Lattice::from_generators(const RMatrix& generators) {
  if (!generators.is_exact())
    throw NumericModeUnsupported("from_generators requires exact generators");
  mpz_class scale = lcm_denominators(generators.data);
  ColumnHnf h = column_hnf(scaled_integer(generators, scale));
  return from_integer_hnf(generators.rows, std::move(h), scale);
}

Lattice Lattice::integer(int dim) { return canonicalize(RMatrix::identity(dim)); }

Lattice Lattice::diagonal(const std::vector<Real>& diag) {
  const int n = static_cast<int>(diag.size());
  RMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = diag[i];
  return canonicalize(m);
}

Real Lattice::det_abs() const {
  if (!is_full_rank()) throw std::logic_error("det_abs of a rank-deficient subgroup");
  return det_abs_;
}

bool operator==(const Lattice& a, const Lattice& b) {
  return a.dim_ == b.dim_ && a.exact_ == b.exact_ && a.basis_ == b.basis_;
}

RankDeficientIntersection::RankDeficientIntersection(Lattice subgroup)
    : Error("lattice intersection has rank " + std::to_string(subgroup.rank()) + " < " +
            std::to_string(subgroup.dim())),
      subgroup_(std::move(subgroup)) {}

Lattice dual(const Lattice& lattice) {
  if (!lattice.is_full_rank()) throw std::logic_error("dual of a rank-deficient subgroup");
  return Lattice::canonicalize(inverse(lattice.basis()).transpose());
}

Lattice intersect_subgroups(const Lattice& a, const Lattice& b) {
  check_dim(a.dim(), b.dim(), "intersect");
  require_exact(a, "intersect");
  require_exact(b, "intersect");
  const int d = a.dim();
  if (a.rank() == 0 || b.rank() == 0) return Lattice::from_generators(RMatrix(d, 0));
  mpz_class scale;
  mpz_lcm(scale.get_mpz_t(), a.denominator().get_mpz_t(), b.denominator().get_mpz_t());
  IMatrix ia = scaled_integer(a.basis(), scale);
  IMatrix ib = scaled_integer(b.basis(), scale);
  IMatrix m(d, a.rank() + b.rank());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < a.rank(); ++j) m(i, j) = ia(i, j);
    for (int j = 0; j < b.rank(); ++j) m(i, a.rank() + j) = -ib(i, j);
  }
  IMatrix k = integer_kernel(m);
  IMatrix top(a.rank(), k.cols);
  for (int i = 0; i < a.rank(); ++i)
    for (int j = 0; j < k.cols; ++j) top(i, j) = k(i, j);
  IMatrix gens = imatmul(ia, top);
  RMatrix rg(d, gens.cols);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < gens.cols; ++j) rg(i, j) = Real(mpq_class(gens(i, j), scale));
  return Lattice::from_generators(rg);
}

Lattice intersect(const Lattice& a, const Lattice& b) {
  Lattice r = intersect_subgroups(a, b);
  if (r.rank() < r.dim()) throw RankDeficientIntersection(std::move(r));
  return r;
}

Lattice subgroup_sum(const Lattice& a, const Lattice& b) {
  check_dim(a.dim(), b.dim(), "subgroup_sum");
  require_exact(a, "subgroup_sum");
  require_exact(b, "subgroup_sum");
  return Lattice::from_generators(hcat(a.basis(), b.basis()));
}

std::optional<std::vector<mpz_class>> coordinates(const Lattice& lattice,
                                                  std::span<const Real> v) {
  check_dim(lattice.dim(), static_cast<int>(v.size()), "coordinates");
  require_exact(lattice, "coordinates");
  if (!is_exact(v)) throw NumericModeUnsupported("coordinates requires an exact vector");
  bool integral = false;
  auto iv = scaled_integer(v, lattice.denominator(), integral);
  if (!integral) return std::nullopt;
  return solve_echelon(lattice.integer_hnf(), iv);
}

bool contains_vector(const Lattice& lattice, std::span<const Real> v, double tol) {
  check_dim(lattice.dim(), static_cast<int>(v.size()), "contains");
  if (lattice.is_exact() && is_exact(v)) return coordinates(lattice, v).has_value();
  std::vector<double> x;
  approx_coordinates(lattice, v, x);
  const RMatrix& b = lattice.basis();
  for (auto& xi : x) {
    double r = std::round(xi);
    if (std::fabs(xi - r) > tol) return false;
    xi = r;
  }
  for (int i = 0; i < lattice.dim(); ++i) {
    double s = 0.0;
    double scale = 1.0;
    for (int j = 0; j < lattice.rank(); ++j) {
      s += b(i, j).to_double() * x[j];
      scale = std::max(scale, std::fabs(b(i, j).to_double() * x[j]));
    }
    if (std::fabs(s - v[i].to_double()) > tol * scale) return false;
  }
  return true;
}

namespace {

IMatrix sublattice_coordinates(const Lattice& sub, const Lattice& lattice) {
  check_dim(lattice.dim(), sub.dim(), "index_in");
  require_exact(lattice, "index_in");
  require_exact(sub, "index_in");
  if (sub.rank() != lattice.rank())
    throw NotASublattice("sublattice rank differs from lattice rank");
  const int r = lattice.rank();
  IMatrix n(r, r);
  for (int j = 0; j < r; ++j) {
    Vec col = sub.basis().column(j);
    auto x = coordinates(lattice, col);
    if (!x) throw NotASublattice("generator " + to_string(col) + " is not in the lattice");
    for (int i = 0; i < r; ++i) n(i, j) = (*x)[i];
  }
  return n;
}

}  // namespace

mpz_class index_in(const Lattice& sub, const Lattice& lattice) {
  mpz_class d = idet(sublattice_coordinates(sub, lattice));
  return abs(d);
}

std::vector<Vec> coset_representatives(const Lattice& lattice, const Lattice& sub) {
  IMatrix n = sublattice_coordinates(sub, lattice);
  const int r = lattice.rank();
  ColumnHnf h = column_hnf(n);
  std::vector<long> extent(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) extent[i] = h.basis(i, i).get_si();
  std::vector<Vec> reps;
  std::vector<long> y(static_cast<std::size_t>(r), 0);
  const RMatrix& b = lattice.basis();
  while (true) {
    Vec p = zeros(lattice.dim());
    for (int j = 0; j < r; ++j)
      if (y[j] != 0)
        for (int i = 0; i < lattice.dim(); ++i) p[i] += b(i, j) * Real(y[j]);
    reps.push_back(std::move(p));
    int pos = 0;
    while (pos < r && ++y[pos] == extent[pos]) y[pos++] = 0;
    if (pos == r) break;
  }
  return reps;
}

namespace {

// Each basis coordinate reduced into [shift, shift + 1).
Vec reduce_impl(const Lattice& lattice, std::span<const Real> v, bool centered) {
  check_dim(lattice.dim(), static_cast<int>(v.size()), "reduce_offset");
  Vec out(v.begin(), v.end());
  const RMatrix& b = lattice.basis();
  const Real half = Real::rational(1, 2);
  if (lattice.is_exact()) {
    for (int j = 0; j < lattice.rank(); ++j) {
      int row = lattice.pivot_rows()[j];
      Real t = out[row] / b(row, j);
      Real c;
      if (t.is_exact()) {
        c = centered ? (t + half).floor() : t.floor();
      } else {
        double td = t.to_double() + (centered ? 0.5 : 0.0);
        c = Real(static_cast<long>(std::floor(td + 1e-12)));
      }
      if (c.is_zero()) continue;
      for (int i = 0; i < lattice.dim(); ++i) out[i] -= c * b(i, j);
    }
    return out;
  }
  std::vector<double> x;
  approx_coordinates(lattice, out, x);
  for (int j = 0; j < lattice.rank(); ++j) {
    double c = std::floor(x[j] + (centered ? 0.5 : 0.0) + 1e-12);
    if (c == 0.0) continue;
    for (int i = 0; i < lattice.dim(); ++i)
      out[i] = Real::numeric(out[i].to_double() - c * b(i, j).to_double());
  }
  return out;
}

}  // namespace

Vec reduce_offset(const Lattice& lattice, std::span<const Real> v) {
  return reduce_impl(lattice, v, false);
}

Vec reduce_centered(const Lattice& lattice, std::span<const Real> v) {
  return reduce_impl(lattice, v, true);
}

Coset::Coset(Lattice lattice, Vec offset)
    : lattice_(std::move(lattice)), offset_(reduce_offset(lattice_, offset)) {}

Coset::Coset(Lattice lattice) : lattice_(std::move(lattice)), offset_(zeros(lattice_.dim())) {}

bool Coset::contains(const Point& p, double tol) const {
  check_dim(dim(), static_cast<int>(p.size()), "Coset::contains");
  return contains_vector(lattice_, vec_sub(p, offset_), tol);
}

bool operator==(const Coset& a, const Coset& b) {
  return a.lattice_ == b.lattice_ && a.offset_ == b.offset_;
}

std::optional<Coset> intersect(const Coset& a, const Coset& b) {
  check_dim(a.dim(), b.dim(), "intersect");
  if (!a.is_exact() || !b.is_exact())
    throw NumericModeUnsupported("coset intersection requires exact cosets");
  const Lattice& la = a.lattice();
  const Lattice& lb = b.lattice();
  Lattice common = intersect_subgroups(la, lb);
  const int d = a.dim();
  // offset_a + A x = offset_b + B y  <=>  [A | -B] (x; y) = offset_b - offset_a
  Vec rhs = vec_sub(b.offset(), a.offset());
  mpz_class scale;
  mpz_lcm(scale.get_mpz_t(), la.denominator().get_mpz_t(), lb.denominator().get_mpz_t());
  bool integral = false;
  auto irhs = scaled_integer(rhs, scale, integral);
  if (!integral) return std::nullopt;
  IMatrix ia = scaled_integer(la.basis(), scale);
  IMatrix ib = scaled_integer(lb.basis(), scale);
  IMatrix m(d, la.rank() + lb.rank());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < la.rank(); ++j) m(i, j) = ia(i, j);
    for (int j = 0; j < lb.rank(); ++j) m(i, la.rank() + j) = -ib(i, j);
  }
  ColumnHnf h = column_hnf(m);
  auto z = solve_echelon(h, irhs);
  if (!z) return std::nullopt;
  Vec p = a.offset();
  for (int j = 0; j < la.rank(); ++j) {
    mpz_class xj = 0;
    for (int c = 0; c < h.rank(); ++c) xj += h.transform(j, c) * (*z)[c];
    if (xj == 0) continue;
    for (int i = 0; i < d; ++i) p[i] += la.basis()(i, j) * Real(xj);
  }
  return Coset(std::move(common), std::move(p));
}

bool near(const Coset& a, const Coset& b, double tol) {
  if (a.dim() != b.dim()) return false;
  if (a.lattice().is_exact() && b.lattice().is_exact()) {
    if (!(a.lattice() == b.lattice())) return false;
  } else if (!near(a.lattice().basis().data, b.lattice().basis().data, tol)) {
    return false;
  }
  return a.contains(b.offset(), tol);
}

bool coset_less(const Coset& a, const Coset& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  if (a.lattice().rank() != b.lattice().rank()) return a.lattice().rank() < b.lattice().rank();
  const auto& ba = a.lattice().basis().data;
  const auto& bb = b.lattice().basis().data;
  if (lex_less(ba, bb)) return true;
  if (lex_less(bb, ba)) return false;
  return lex_less(a.offset(), b.offset());
}

double separating_constant(const std::vector<std::vector<double>>& pts) {
  if (pts.size() < 2) throw TooFewPoints("separating_constant needs at least 2 points");
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < order.size(); ++a) {
    const auto& p = pts[order[a]];
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const auto& q = pts[order[b]];
      if (q[0] - p[0] >= best) break;
      double s = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
      best = std::min(best, std::sqrt(s));
    }
  }
  return best;
}

double separating_constant(const std::vector<Point>& points) {
  std::vector<std::vector<double>> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(to_doubles(p));
  return separating_constant(pts);
}

int bounded_density_count(const std::vector<Point>& points, double pitch) {
  if (points.empty()) return 0;
  if (pitch <= 0) throw std::invalid_argument("bounded_density_count: pitch must be positive");
  const std::size_t d = points[0].size();
  std::vector<std::vector<double>> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(to_doubles(p));
  std::vector<double> lo(pts[0]), hi(pts[0]);
  for (const auto& p : pts)
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  // Unit cells: any point within distance 1 of a centre lies in a neighbouring cell.
  std::map<std::vector<long>, std::vector<std::size_t>> cells;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::vector<long> key(d);
    for (std::size_t i = 0; i < d; ++i) key[i] = static_cast<long>(std::floor(pts[k][i]));
    cells[key].push_back(k);
  }
  std::vector<long> steps(d);
  for (std::size_t i = 0; i < d; ++i)
    steps[i] = static_cast<long>(std::floor((hi[i] - lo[i]) / pitch + 1e-9)) + 1;
  std::vector<long> idx(d, 0);
  int best = 0;
  std::vector<double> c(d);
  std::vector<long> base(d), off(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = lo[i] + pitch * static_cast<double>(idx[i]);
      base[i] = static_cast<long>(std::floor(c[i]));
    }
    int count = 0;
    std::fill(off.begin(), off.end(), -1);
    while (true) {
      std::vector<long> key(d);
      for (std::size_t i = 0; i < d; ++i) key[i] = base[i] + off[i];
      if (auto it = cells.find(key); it != cells.end())
        for (std::size_t k : it->second) {
          double s = 0.0;
          for (std::size_t i = 0; i < d; ++i) s += (pts[k][i] - c[i]) * (pts[k][i] - c[i]);
          if (s <= 1.0 + 1e-12) ++count;
        }
      std::size_t pos = 0;
      while (pos < d && ++off[pos] == 2) off[pos++] = -1;
      if (pos == d) break;
    }
    best = std::max(best, count);
    std::size_t pos = 0;
    while (pos < d && ++idx[pos] == steps[pos]) idx[pos++] = 0;
    if (pos == d) break;
  }
  return best;
}

}  // namespace quasicomb
