#include "greenkernel/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace greenkernel {

FpMatrix::FpMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FpMatrix FpMatrix::identity(PrimeField field, std::size_t n) {
  FpMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::from_columns(PrimeField field, std::size_t rows, std::span<const Vec> columns) {
  FpMatrix m(field, rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

FpMatrix FpMatrix::from_rows(PrimeField field, std::size_t cols, std::span<const Vec> rows) {
  FpMatrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InputError("row length mismatch");
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + r * cols);
  }
  return m;
}

Vec FpMatrix::row(std::size_t r) const {
  return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

Vec FpMatrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void FpMatrix::set_column(std::size_t c, std::span<const Residue> v) {
  if (v.size() != rows_) throw InputError("column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r] % field_.p();
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
  if (cols_ != o.rows_ || !(field_ == o.field_)) throw InputError("matrix product shape mismatch");
  FpMatrix out(field_, rows_, o.cols_);
  std::vector<std::uint64_t> acc(o.cols_);
  const std::uint64_t p = field_.p();
  for (std::size_t i = 0; i < rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint64_t a = (*this)(i, k);
      if (a == 0) continue;
      const Residue* brow = &o.data_[k * o.cols_];
      for (std::size_t j = 0; j < o.cols_; ++j) acc[j] += a * brow[j];
      // Keep the accumulator far from overflow: entries are < 2^32 each step.
      if ((k & 0x3ff) == 0x3ff) {
        for (auto& x : acc) x %= p;
      }
    }
    for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) = static_cast<Residue>(acc[j] % p);
  }
  return out;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix sum shape mismatch");
  FpMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.add(data_[i], o.data_[i]);
  return out;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix difference shape mismatch");
  FpMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.sub(data_[i], o.data_[i]);
  return out;
}

FpMatrix FpMatrix::scaled(Residue s) const {
  FpMatrix out(*this);
  for (auto& x : out.data_) x = field_.mul(x, s % field_.p());
  return out;
}

Vec FpMatrix::apply(std::span<const Residue> v) const {
  if (v.size() != cols_) throw InputError("matrix-vector shape mismatch");
  Vec out(rows_);
  const std::uint64_t p = field_.p();
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    const Residue* r = &data_[i * cols_];
    for (std::size_t k = 0; k < cols_; ++k) {
      acc += static_cast<std::uint64_t>(r[k]) * v[k];
      if ((k & 0x3ff) == 0x3ff) acc %= p;
    }
    out[i] = static_cast<Residue>(acc % p);
  }
  return out;
}

FpMatrix FpMatrix::transposed() const {
  FpMatrix out(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

FpMatrix FpMatrix::stacked(const FpMatrix& below) const {
  if (cols_ != below.cols_) throw InputError("cannot stack matrices with different widths");
  FpMatrix out(field_, rows_ + below.rows_, cols_);
  std::copy(data_.begin(), data_.end(), out.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + data_.size());
  return out;
}

bool FpMatrix::operator==(const FpMatrix& o) const noexcept {
  return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool FpMatrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Residue x) { return x == 0; });
}

std::size_t FpMatrix::rank() const { return row_reduce(*this).pivot_columns.size(); }

std::optional<FpMatrix> FpMatrix::inverse() const {
  if (rows_ != cols_) throw InputError("inverse of a non-square matrix");
  const std::size_t n = rows_;
  FpMatrix aug(field_, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (e.pivot_columns.size() < n || e.pivot_columns[n - 1] != n - 1) return std::nullopt;
  FpMatrix out(field_, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = e.reduced(i, n + j);
  return out;
}

std::string FpMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

RowEchelon row_reduce(FpMatrix m) {
  const PrimeField& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  for (std::size_t c = 0; c < cols && prow < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t r = prow; r < rows; ++r) {
      if (m(r, c) != 0) {
        sel = r;
        break;
      }
    }
    if (sel == rows) continue;
    if (sel != prow) {
      for (std::size_t j = c; j < cols; ++j) std::swap(m(sel, j), m(prow, j));
    }
    const Residue inv = f.inv(m(prow, c));
    for (std::size_t j = c; j < cols; ++j) m(prow, j) = f.mul(m(prow, j), inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == prow) continue;
      const Residue factor = m(r, c);
      if (factor == 0) continue;
      const Residue nf = f.neg(factor);
      for (std::size_t j = c; j < cols; ++j) {
        if (m(prow, j) != 0) m(r, j) = f.add(m(r, j), f.mul(nf, m(prow, j)));
      }
    }
    pivots.push_back(c);
    ++prow;
  }
  return RowEchelon{std::move(m), std::move(pivots)};
}

std::vector<Vec> mat_kernel(const FpMatrix& m) {
  const PrimeField& f = m.field();
  RowEchelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_columns) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivot_columns.size(); ++i) {
      v[e.pivot_columns[i]] = f.neg(e.reduced(i, free));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const FpMatrix& m, std::span<const Residue> b) {
  if (b.size() != m.rows()) throw InputError("right-hand side length mismatch");
  FpMatrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i] % m.field().p();
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (!e.pivot_columns.empty() && e.pivot_columns.back() == m.cols()) return std::nullopt;
  Vec x(m.cols(), 0);
  for (std::size_t i = 0; i < e.pivot_columns.size(); ++i) {
    x[e.pivot_columns[i]] = e.reduced(i, m.cols());
  }
  return x;
}

std::vector<Vec> span_basis(const PrimeField& field, std::size_t dim, std::span<const Vec> vectors) {
  for (const auto& v : vectors) {
    if (v.size() != dim) throw InputError("vector dimension mismatch in span");
  }
  if (vectors.empty()) return {};
  RowEchelon e = row_reduce(FpMatrix::from_rows(field, dim, vectors));
  std::vector<Vec> out;
  out.reserve(e.pivot_columns.size());
  for (std::size_t i = 0; i < e.pivot_columns.size(); ++i) out.push_back(e.reduced.row(i));
  return out;
}

namespace {

std::vector<Vec> intersect_pair(const PrimeField& f, std::size_t dim, const std::vector<Vec>& a,
                                const std::vector<Vec>& b) {
  if (a.empty() || b.empty()) return {};
  // Columns [a_1..a_k | b_1..b_m]; kernel vectors (s, t) give sum s_i a_i = -sum t_j b_j.
  std::vector<Vec> cols;
  cols.reserve(a.size() + b.size());
  for (const auto& v : a) cols.push_back(v);
  for (const auto& v : b) cols.push_back(v);
  const FpMatrix m = FpMatrix::from_columns(f, dim, cols);
  std::vector<Vec> meet;
  for (const auto& k : mat_kernel(m)) {
    Vec w(dim, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (k[i] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d) w[d] = f.add(w[d], f.mul(k[i], a[i][d]));
    }
    meet.push_back(std::move(w));
  }
  return span_basis(f, dim, meet);
}

}  // namespace

std::vector<Vec> subspace_intersect(const PrimeField& field, std::size_t dim,
                                    std::span<const std::vector<Vec>> bases) {
  for (const auto& basis : bases) {
    for (const auto& v : basis) {
      if (v.size() != dim) throw InputError("subspace_intersect: dimension mismatch");
    }
  }
  if (bases.empty()) {
    std::vector<Vec> full;
    for (std::size_t i = 0; i < dim; ++i) full.push_back(unit_vector(dim, i));
    return full;
  }
  std::vector<Vec> acc = span_basis(field, dim, bases[0]);
  for (std::size_t i = 1; i < bases.size() && !acc.empty(); ++i) {
    acc = intersect_pair(field, dim, acc, span_basis(field, dim, bases[i]));
  }
  return acc;
}

bool in_span(const PrimeField& field, std::size_t dim, std::span<const Vec> basis,
             std::span<const Residue> v) {
  if (vec_is_zero(v)) return true;
  if (basis.empty()) return false;
  const FpMatrix m = FpMatrix::from_columns(field, dim, basis);
  return solve(m, v).has_value();
}

bool same_span(const PrimeField& field, std::size_t dim, std::span<const Vec> a,
               std::span<const Vec> b) {
  return span_basis(field, dim, a) == span_basis(field, dim, b);
}

Vec vec_add(const PrimeField& f, std::span<const Residue> a, std::span<const Residue> b) {
  if (a.size() != b.size()) throw InputError("vector length mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], b[i]);
  return out;
}

Vec vec_sub(const PrimeField& f, std::span<const Residue> a, std::span<const Residue> b) {
  if (a.size() != b.size()) throw InputError("vector length mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.sub(a[i], b[i]);
  return out;
}

Vec vec_scale(const PrimeField& f, Residue s, std::span<const Residue> a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.mul(s % f.p(), a[i]);
  return out;
}

Residue dot(const PrimeField& f, std::span<const Residue> a, std::span<const Residue> b) {
  if (a.size() != b.size()) throw InputError("vector length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<std::uint64_t>(a[i]) * b[i];
    if ((i & 0x3ff) == 0x3ff) acc %= f.p();
  }
  return static_cast<Residue>(acc % f.p());
}

bool vec_is_zero(std::span<const Residue> a) noexcept {
  return std::all_of(a.begin(), a.end(), [](Residue x) { return x == 0; });
}

Vec unit_vector(std::size_t dim, std::size_t i) {
  Vec v(dim, 0);
  v[i] = 1;
  return v;
}

}  // namespace greenkernel
