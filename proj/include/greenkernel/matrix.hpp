#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greenkernel/field.hpp"

namespace greenkernel {

/// Dense vector over F_p; the modulus travels with the surrounding matrix or algebra.
using Vec = std::vector<Residue>;

/// Dense row-major matrix over F_p.
class FpMatrix {
 public:
  FpMatrix(PrimeField field, std::size_t rows, std::size_t cols);

  static FpMatrix identity(PrimeField field, std::size_t n);
  /// Matrix whose columns are the given vectors (all of length `rows`).
  static FpMatrix from_columns(PrimeField field, std::size_t rows, std::span<const Vec> columns);
  static FpMatrix from_rows(PrimeField field, std::size_t cols, std::span<const Vec> rows);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Residue& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Residue> v);

  FpMatrix operator*(const FpMatrix& o) const;
  FpMatrix operator+(const FpMatrix& o) const;
  FpMatrix operator-(const FpMatrix& o) const;
  FpMatrix scaled(Residue s) const;
  Vec apply(std::span<const Residue> v) const;
  FpMatrix transposed() const;
  /// Rows of `this` followed by rows of `below`.
  FpMatrix stacked(const FpMatrix& below) const;

  bool operator==(const FpMatrix& o) const noexcept;
  bool is_zero() const noexcept;

  std::size_t rank() const;
  /// Inverse of a square matrix, or nullopt when singular.
  std::optional<FpMatrix> inverse() const;

  std::string to_string() const;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

/// Reduced row echelon form; pivots chosen leftmost column first, smallest row index first.
struct RowEchelon {
  FpMatrix reduced;
  std::vector<std::size_t> pivot_columns;
};

RowEchelon row_reduce(FpMatrix m);

/// Basis of {v : M v = 0}. One vector per free column, with 1 in that column.
std::vector<Vec> mat_kernel(const FpMatrix& m);

/// One solution of M x = b (free variables set to zero), or nullopt.
std::optional<Vec> solve(const FpMatrix& m, std::span<const Residue> b);

/// Canonical (reduced echelon) basis of the span of the given vectors.
std::vector<Vec> span_basis(const PrimeField& field, std::size_t dim, std::span<const Vec> vectors);

/// Basis of the intersection of the spans; all bases must live in F_p^dim.
std::vector<Vec> subspace_intersect(const PrimeField& field, std::size_t dim,
                                    std::span<const std::vector<Vec>> bases);

bool in_span(const PrimeField& field, std::size_t dim, std::span<const Vec> basis,
             std::span<const Residue> v);

bool same_span(const PrimeField& field, std::size_t dim, std::span<const Vec> a,
               std::span<const Vec> b);

// Vector helpers.
Vec vec_add(const PrimeField& f, std::span<const Residue> a, std::span<const Residue> b);
Vec vec_sub(const PrimeField& f, std::span<const Residue> a, std::span<const Residue> b);
Vec vec_scale(const PrimeField& f, Residue s, std::span<const Residue> a);
Residue dot(const PrimeField& f, std::span<const Residue> a, std::span<const Residue> b);
bool vec_is_zero(std::span<const Residue> a) noexcept;
Vec unit_vector(std::size_t dim, std::size_t i);

}  // namespace greenkernel
