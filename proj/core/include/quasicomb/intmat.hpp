#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace quasicomb {

/// Dense row-major integer matrix with arbitrary-precision entries.
struct IMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<mpz_class> data;

  IMatrix() = default;
  IMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}
  static IMatrix identity(int n);

  mpz_class& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const mpz_class& operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  friend bool operator==(const IMatrix&, const IMatrix&) = default;
};

/// Result of column Hermite reduction: input * transform == [basis | 0].
struct ColumnHnf {
  /// rows x rank, lower echelon; pivot of column j sits in row pivot_rows[j],
  /// is positive, and every entry left of it in that row lies in [0, pivot).
  IMatrix basis;
  std::vector<int> pivot_rows;
  /// cols x cols unimodular.
  IMatrix transform;
  int rank() const { return static_cast<int>(pivot_rows.size()); }
};

/// Canonical column HNF of the lattice spanned by the columns of `a`.
ColumnHnf column_hnf(const IMatrix& a);

/// Integer kernel basis (columns) of `a`.
IMatrix integer_kernel(const IMatrix& a);

/// Solves basis * x == b for integer x, where `h` came out of column_hnf.
/// Returns nullopt when no integer solution exists.
std::optional<std::vector<mpz_class>> solve_echelon(const ColumnHnf& h,
                                                    std::span<const mpz_class> b);

IMatrix imatmul(const IMatrix& a, const IMatrix& b);
mpz_class idet(const IMatrix& a);

}  // namespace quasicomb
