#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "greenkernel/error.hpp"

namespace greenkernel {

using Residue = std::uint32_t;

bool is_prime(std::uint64_t n);

/// The prime field F_p. Moduli are limited to p < 2^16 so products fit in 32 bits.
class PrimeField {
 public:
  using value_type = Residue;

  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }

  Residue zero() const noexcept { return 0; }
  Residue one() const noexcept { return 1; }
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept { return (a * b) % p_; }
  Residue inv(Residue a) const;
  Residue pow(Residue a, std::uint64_t e) const noexcept;
  bool is_zero(Residue a) const noexcept { return a == 0; }
  /// Reduce an arbitrary (possibly negative) integer.
  Residue from_int(std::int64_t v) const noexcept;

  bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

 private:
  std::uint32_t p_;
};

/// A single element of F_p that remembers its modulus.
class FpScalar {
 public:
  FpScalar(Residue value, std::uint32_t p);

  Residue value() const noexcept { return value_; }
  std::uint32_t p() const noexcept { return p_; }

  FpScalar operator+(const FpScalar& o) const;
  FpScalar operator-(const FpScalar& o) const;
  FpScalar operator*(const FpScalar& o) const;
  FpScalar operator-() const;
  FpScalar inverse() const;
  bool operator==(const FpScalar& o) const noexcept {
    return value_ == o.value_ && p_ == o.p_;
  }

 private:
  void check_same(const FpScalar& o) const;
  Residue value_;
  std::uint32_t p_;
};

std::ostream& operator<<(std::ostream& os, const FpScalar& s);

/// Arbitrary-precision rational, always kept in lowest terms with positive denominator.
using BigRational = mpq_class;

/// num/den in lowest terms with positive denominator; throws InputError when den = 0.
BigRational make_rational(const mpz_class& num, const mpz_class& den);

/// Ring policy for rational coefficients; mirrors PrimeField's interface.
struct RationalField {
  using value_type = BigRational;
  BigRational zero() const { return BigRational(0); }
  BigRational one() const { return BigRational(1); }
  BigRational add(const BigRational& a, const BigRational& b) const { return a + b; }
  BigRational sub(const BigRational& a, const BigRational& b) const { return a - b; }
  BigRational neg(const BigRational& a) const { return -a; }
  BigRational mul(const BigRational& a, const BigRational& b) const { return a * b; }
  bool is_zero(const BigRational& a) const { return sgn(a) == 0; }
  BigRational from_int(std::int64_t v) const { return BigRational(static_cast<long>(v)); }
  bool operator==(const RationalField&) const noexcept { return true; }
};

/// Reduce a p-integral rational into F_p; throws InvariantError if p divides the denominator.
Residue reduce_mod_p(const BigRational& r, const PrimeField& field);

std::string to_string(const BigRational& r);

}  // namespace greenkernel
