#pragma once

#include <cstdint>
#include <memory>

#include "greenkernel/truncpoly.hpp"

namespace greenkernel {

/// Height-n parameters: q = p^n and the per-variable truncation D.
struct HondaParams {
  std::uint32_t p = 2;
  std::uint32_t n = 1;
  std::uint64_t q = 2;
  std::uint32_t trunc = 2;
};

/// Validates p prime, n >= 1, D >= 2 and computes q.
HondaParams make_honda_params(std::uint32_t p, std::uint32_t n, std::uint32_t trunc);

/// p^e, throwing BudgetError when the result does not fit in 32 bits.
std::uint64_t checked_power(std::uint64_t p, std::uint32_t e);

/// Logarithm sum_{i>=0, q^i < D} x^{q^i} / p^i as a rational series with cap D.
QPoly honda_log(const HondaParams& params);

/// Compositional inverse of a rational series f = x + O(x^2), with the given cap.
QPoly series_reversion(const QPoly& f, std::uint32_t cap);

/// Multiplicative inverse of a univariate series with invertible constant term.
template <class Ring>
TruncPoly<Ring> series_inverse(const TruncPoly<Ring>& u);

/// Formal derivative of a univariate series.
template <class Ring>
TruncPoly<Ring> series_derivative(const TruncPoly<Ring>& f);

/// The Honda formal group law over F_p, truncated at x^D and y^D.
class Fgl {
 public:
  Fgl(HondaParams params, FpPoly law);

  const HondaParams& params() const noexcept { return params_; }
  const PrimeField& field() const noexcept { return field_; }
  /// F(x, y) with caps (D, D).
  const FpPoly& law() const noexcept { return law_; }
  /// iota(x) with F(x, iota(x)) = 0, cap D.
  const FpPoly& inverse_series() const noexcept { return inverse_; }

  /// F(a, b) for a, b in a common layout. Exact whenever a^D = b^D = 0 there.
  FpPoly add(const FpPoly& a, const FpPoly& b) const;
  /// iota(a), under the same nilpotency condition as add().
  FpPoly negate(const FpPoly& a) const;

  /// [m](x) with cap `cap` <= D.
  FpPoly m_series(std::int64_t m, std::uint32_t cap) const;

 private:
  HondaParams params_;
  PrimeField field_;
  FpPoly law_;
  FpPoly inverse_;
};

using FglPtr = std::shared_ptr<const Fgl>;

/// exp(log x + log y) over Q, checked p-integral and reduced mod p. Requires D >= q.
Fgl honda_fgl(const HondaParams& params);

/// Shared, memoized honda_fgl keyed by (p, n, D); safe under concurrent callers.
FglPtr cached_fgl(std::uint32_t p, std::uint32_t n, std::uint32_t trunc);

}  // namespace greenkernel
