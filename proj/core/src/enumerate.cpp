// Lattice point enumeration in balls: floating-point LLL followed by a
// Fincke-Pohst style depth-first search over Gram-Schmidt coordinates.

#include <algorithm>
#include <cmath>
#include <functional>

#include "quasicomb/lattice.hpp"

namespace quasicomb {

namespace {

struct ReducedBasis {
  int dim = 0;
  int rank = 0;
  std::vector<double> b;     // column j at b[j * dim + i]
  std::vector<long long> u;  // x = U y, U at u[i * rank + j]
  std::vector<double> bstar_sq;
  std::vector<double> mu;    // mu[i * rank + j], j < i
  std::vector<double> bstar;  // column j at bstar[j * dim + i]

  double* col(int j) { return &b[static_cast<std::size_t>(j) * dim]; }
  const double* col(int j) const { return &b[static_cast<std::size_t>(j) * dim]; }
};

void gram_schmidt(ReducedBasis& r) {
  const int d = r.dim;
  const int n = r.rank;
  r.bstar.assign(r.b.begin(), r.b.end());
  r.bstar_sq.assign(static_cast<std::size_t>(n), 0.0);
  r.mu.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double* bi = &r.bstar[static_cast<std::size_t>(i) * d];
    for (int j = 0; j < i; ++j) {
      const double* bj = &r.bstar[static_cast<std::size_t>(j) * d];
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += r.col(i)[k] * bj[k];
      double m = r.bstar_sq[j] > 0 ? s / r.bstar_sq[j] : 0.0;
      r.mu[static_cast<std::size_t>(i) * n + j] = m;
      for (int k = 0; k < d; ++k) bi[k] -= m * bj[k];
    }
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += bi[k] * bi[k];
    r.bstar_sq[i] = s;
  }
}

ReducedBasis lll(const Lattice& lattice) {
  ReducedBasis r;
  r.dim = lattice.dim();
  r.rank = lattice.rank();
  const int d = r.dim;
  const int n = r.rank;
  r.b.resize(static_cast<std::size_t>(d) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) r.col(j)[i] = lattice.basis()(i, j).to_double();
  r.u.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) r.u[static_cast<std::size_t>(i) * n + i] = 1;
  if (n <= 1) {
    gram_schmidt(r);
    return r;
  }
  constexpr double delta = 0.99;
  gram_schmidt(r);
  int k = 1;
  int guard = 0;
  while (k < n && guard++ < 100000) {
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(r.mu[static_cast<std::size_t>(k) * n + j]);
      if (q == 0.0) continue;
      auto qi = static_cast<long long>(q);
      for (int i = 0; i < d; ++i) r.col(k)[i] -= q * r.col(j)[i];
      for (int i = 0; i < n; ++i)
        r.u[static_cast<std::size_t>(i) * n + k] -= qi * r.u[static_cast<std::size_t>(i) * n + j];
      gram_schmidt(r);
    }
    double m = r.mu[static_cast<std::size_t>(k) * n + k - 1];
    if (r.bstar_sq[k] >= (delta - m * m) * r.bstar_sq[k - 1]) {
      ++k;
    } else {
      for (int i = 0; i < d; ++i) std::swap(r.col(k)[i], r.col(k - 1)[i]);
      for (int i = 0; i < n; ++i)
        std::swap(r.u[static_cast<std::size_t>(i) * n + k],
                  r.u[static_cast<std::size_t>(i) * n + k - 1]);
      gram_schmidt(r);
      k = std::max(k - 1, 1);
    }
  }
  return r;
}

// Visits integer y with |B y - target| <= radius; hands over y and B y.
void search(const ReducedBasis& r, std::span<const double> target, double radius,
            const std::function<void(const std::vector<long long>&, const std::vector<double>&)>&
                visit) {
  const int d = r.dim;
  const int n = r.rank;
  std::vector<double> tcoef(static_cast<std::size_t>(n), 0.0);
  double par = 0.0;
  for (int j = 0; j < n; ++j) {
    const double* bj = &r.bstar[static_cast<std::size_t>(j) * d];
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += target[k] * bj[k];
    tcoef[j] = r.bstar_sq[j] > 0 ? s / r.bstar_sq[j] : 0.0;
    par += tcoef[j] * tcoef[j] * r.bstar_sq[j];
  }
  double tnorm = 0.0;
  for (int k = 0; k < d; ++k) tnorm += target[k] * target[k];
  double perp = std::max(0.0, tnorm - par);
  double budget = radius * radius - perp;
  // Floating noise in the perpendicular part must not drop boundary points.
  budget += 1e-9 * (radius * radius + tnorm) + 1e-12;
  if (budget < 0) return;

  std::vector<long long> y(static_cast<std::size_t>(n), 0);
  std::vector<double> point(static_cast<std::size_t>(d), 0.0);
  std::function<void(int, double)> rec = [&](int level, double remaining) {
    if (level < 0) {
      std::fill(point.begin(), point.end(), 0.0);
      for (int j = 0; j < n; ++j)
        if (y[j] != 0)
          for (int k = 0; k < d; ++k) point[k] += static_cast<double>(y[j]) * r.col(j)[k];
      visit(y, point);
      return;
    }
    double c = tcoef[level];
    for (int i = level + 1; i < n; ++i)
      c -= r.mu[static_cast<std::size_t>(i) * n + level] * static_cast<double>(y[i]);
    double w = std::sqrt(std::max(0.0, remaining) / r.bstar_sq[level]);
    auto lo = static_cast<long long>(std::ceil(c - w));
    auto hi = static_cast<long long>(std::floor(c + w));
    for (long long v = lo; v <= hi; ++v) {
      double diff = static_cast<double>(v) - c;
      double used = diff * diff * r.bstar_sq[level];
      if (used > remaining) continue;
      y[level] = v;
      rec(level - 1, remaining - used);
    }
    y[level] = 0;
  };
  if (n == 0) {
    visit(y, point);
    return;
  }
  rec(n - 1, budget);
}

}  // namespace

void for_each_in_ball(const Coset& coset, std::span<const double> center, double radius,
                      const std::function<void(std::span<const double>)>& visit) {
  check_dim(coset.dim(), static_cast<int>(center.size()), "for_each_in_ball");
  if (radius < 0) return;
  const int d = coset.dim();
  ReducedBasis r = lll(coset.lattice());
  std::vector<double> off = to_doubles(coset.offset());
  std::vector<double> target(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) target[i] = center[i] - off[i];
  std::vector<double> p(static_cast<std::size_t>(d));
  search(r, target, radius, [&](const std::vector<long long>&, const std::vector<double>& q) {
    for (int i = 0; i < d; ++i) p[i] = q[i] + off[i];
    visit(p);
  });
}

std::vector<Point> enumerate_in_ball(const Coset& coset, const Point& center, double radius) {
  check_dim(coset.dim(), static_cast<int>(center.size()), "enumerate_in_ball");
  if (radius < 0) throw std::invalid_argument("enumerate_in_ball: radius must be >= 0");
  const int d = coset.dim();
  const Lattice& lat = coset.lattice();
  const int n = lat.rank();
  ReducedBasis r = lll(lat);
  std::vector<double> off = to_doubles(coset.offset());
  std::vector<double> c = to_doubles(center);
  std::vector<double> target(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) target[i] = c[i] - off[i];

  const bool exact = coset.is_exact() && is_exact(center);
  const Real r2 = exact ? Real(mpq_class(radius) * mpq_class(radius)) : Real::numeric(radius * radius);
  std::vector<Point> out;
  search(r, target, radius, [&](const std::vector<long long>& y, const std::vector<double>& q) {
    Point p;
    if (lat.is_exact()) {
      // x = U y, point = offset + B x with the exact stored basis.
      p = coset.offset();
      for (int j = 0; j < n; ++j) {
        long long xj = 0;
        for (int k = 0; k < n; ++k) xj += r.u[static_cast<std::size_t>(j) * n + k] * y[k];
        if (xj == 0) continue;
        Real xr(static_cast<long>(xj));
        for (int i = 0; i < d; ++i) p[i] += lat.basis()(i, j) * xr;
      }
    } else {
      p.resize(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) p[i] = Real::numeric(q[i] + off[i]);
    }
    if (exact) {
      Real s;
      for (int i = 0; i < d; ++i) {
        Real t = p[i] - center[i];
        s += t * t;
      }
      if (s <= r2) out.push_back(std::move(p));
    } else {
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        double t = p[i].to_double() - c[i];
        s += t * t;
      }
      if (s <= radius * radius * (1.0 + 1e-12)) out.push_back(std::move(p));
    }
  });
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return lex_less(a, b); });
  return out;
}

double covering_radius_bound(const Lattice& lattice) {
  ReducedBasis r = lll(lattice);
  double s = 0.0;
  for (int j = 0; j < r.rank; ++j) {
    double n2 = 0.0;
    for (int i = 0; i < r.dim; ++i) n2 += r.col(j)[i] * r.col(j)[i];
    s += std::sqrt(n2);
  }
  return 0.5 * s;
}

}  // namespace quasicomb
