#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greenkernel/field.hpp"

namespace greenkernel {

using Exponents = std::vector<std::uint32_t>;

/// Packs an exponent vector into a 64-bit word, one bit field per variable.
///
/// Variable 0 occupies the most significant field, so numeric order of codes is
/// lexicographic order of exponent vectors. Each field is wide enough to hold the
/// sum of two in-range exponents, which lets products be formed by adding codes.
class MonomialLayout {
 public:
  explicit MonomialLayout(std::vector<std::uint32_t> caps);

  std::size_t num_vars() const noexcept { return caps_.size(); }
  const std::vector<std::uint32_t>& caps() const noexcept { return caps_; }
  /// Number of monomials within caps.
  std::uint64_t space() const noexcept { return space_; }

  std::uint64_t encode(std::span<const std::uint32_t> exps) const;
  Exponents decode(std::uint64_t code) const;
  std::uint32_t exponent(std::uint64_t code, std::size_t var) const noexcept {
    return static_cast<std::uint32_t>((code >> shift_[var]) & mask_[var]);
  }
  /// True when every field of the code is below its cap.
  bool within_caps(std::uint64_t code) const noexcept {
    for (std::size_t v = 0; v < caps_.size(); ++v) {
      if (((code >> shift_[v]) & mask_[v]) >= caps_[v]) return false;
    }
    return true;
  }
  std::uint32_t degree(std::uint64_t code) const noexcept;
  /// Mixed-radix position in [0, space()).
  std::uint64_t dense_index(std::uint64_t code) const noexcept;
  std::uint64_t code_of_dense(std::uint64_t index) const noexcept;

  bool operator==(const MonomialLayout& o) const noexcept { return caps_ == o.caps_; }

 private:
  std::vector<std::uint32_t> caps_;
  std::vector<std::uint32_t> shift_;
  std::vector<std::uint64_t> mask_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t space_ = 1;
};

using LayoutPtr = std::shared_ptr<const MonomialLayout>;

LayoutPtr make_layout(std::vector<std::uint32_t> caps);

/// Sparse polynomial in k variables reduced modulo (x_i^{cap_i}).
///
/// `Ring` is PrimeField or RationalField. Zero coefficients are never stored and
/// terms are kept sorted by monomial code.
template <class Ring>
class TruncPoly {
 public:
  using Coef = typename Ring::value_type;
  using Term = std::pair<std::uint64_t, Coef>;

  TruncPoly(Ring ring, LayoutPtr layout) : ring_(std::move(ring)), layout_(std::move(layout)) {}

  static TruncPoly constant(Ring ring, LayoutPtr layout, Coef c);
  static TruncPoly variable(Ring ring, LayoutPtr layout, std::size_t var);
  static TruncPoly monomial(Ring ring, LayoutPtr layout, std::span<const std::uint32_t> exps,
                            Coef c);

  const Ring& ring() const noexcept { return ring_; }
  const LayoutPtr& layout() const noexcept { return layout_; }
  const std::vector<std::uint32_t>& caps() const noexcept { return layout_->caps(); }
  std::size_t num_vars() const noexcept { return layout_->num_vars(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Coef coefficient(std::span<const std::uint32_t> exps) const;
  Coef coefficient_code(std::uint64_t code) const;
  /// Adds c to the coefficient of the given monomial (dropped when outside caps).
  void add_term(std::span<const std::uint32_t> exps, const Coef& c);

  TruncPoly operator+(const TruncPoly& o) const;
  TruncPoly operator-(const TruncPoly& o) const;
  TruncPoly operator-() const;
  /// Product with every monomial outside the caps discarded.
  TruncPoly operator*(const TruncPoly& o) const;
  TruncPoly scaled(const Coef& c) const;
  TruncPoly pow(std::uint64_t e) const;
  bool operator==(const TruncPoly& o) const;

  /// Same polynomial viewed in a layout with the same number of variables; terms
  /// outside the new caps are dropped.
  TruncPoly recapped(LayoutPtr target) const;

  /// Substitute images[i] for variable i. All images share one target layout.
  TruncPoly substitute(std::span<const TruncPoly> images) const;

  /// Lowest total degree among stored terms (or UINT32_MAX for zero).
  std::uint32_t valuation() const noexcept;

  /// Terms in graded order: total degree ascending, lexicographically descending inside a degree.
  std::vector<std::pair<Exponents, Coef>> graded_terms() const;

  std::string to_string(std::span<const std::string> var_names) const;
  std::string to_string() const;

  /// Build from unsorted, possibly repeated (code, coef) pairs.
  static TruncPoly from_unsorted(Ring ring, LayoutPtr layout, std::vector<Term> raw);

 private:
  void check_compatible(const TruncPoly& o) const;
  Ring ring_;
  LayoutPtr layout_;
  std::vector<Term> terms_;
};

using FpPoly = TruncPoly<PrimeField>;
using QPoly = TruncPoly<RationalField>;

extern template class TruncPoly<PrimeField>;
extern template class TruncPoly<RationalField>;

/// Product of two polynomials sharing caps; throws InputError on mismatched caps.
template <class Ring>
TruncPoly<Ring> poly_mul_trunc(const TruncPoly<Ring>& a, const TruncPoly<Ring>& b) {
  return a * b;
}

/// Reduce a p-integral rational polynomial coefficientwise into F_p.
FpPoly reduce_mod_p(const QPoly& poly, const PrimeField& field);

}  // namespace greenkernel
