#include "greenkernel/field.hpp"

namespace greenkernel {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= (1u << 16) || !is_prime(p)) {
    throw InputError("modulus " + std::to_string(p) + " is not a prime below 65536");
  }
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const noexcept {
  Residue result = 1 % p_;
  Residue base = a % p_;
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw InputError("zero has no inverse in F_" + std::to_string(p_));
  return pow(a, p_ - 2);
}

Residue PrimeField::from_int(std::int64_t v) const noexcept {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Residue>(r);
}

FpScalar::FpScalar(Residue value, std::uint32_t p) : value_(0), p_(p) {
  PrimeField f(p);
  value_ = value % p;
}

void FpScalar::check_same(const FpScalar& o) const {
  if (p_ != o.p_) throw InputError("mixed moduli in FpScalar arithmetic");
}

FpScalar FpScalar::operator+(const FpScalar& o) const {
  check_same(o);
  return FpScalar((value_ + o.value_) % p_, p_);
}

FpScalar FpScalar::operator-(const FpScalar& o) const {
  check_same(o);
  return FpScalar((value_ + p_ - o.value_) % p_, p_);
}

FpScalar FpScalar::operator*(const FpScalar& o) const {
  check_same(o);
  return FpScalar((value_ * o.value_) % p_, p_);
}

FpScalar FpScalar::operator-() const { return FpScalar((p_ - value_) % p_, p_); }

FpScalar FpScalar::inverse() const { return FpScalar(PrimeField(p_).inv(value_), p_); }

std::ostream& operator<<(std::ostream& os, const FpScalar& s) { return os << s.value(); }

Residue reduce_mod_p(const BigRational& r, const PrimeField& field) {
  const mpz_class p(field.p());
  mpz_class den = r.get_den();
  if (den % p == 0) {
    throw InvariantError("coefficient " + to_string(r) + " is not " + std::to_string(field.p()) +
                         "-integral");
  }
  mpz_class num = r.get_num() % p;
  if (num < 0) num += p;
  den %= p;
  const Residue n = static_cast<Residue>(num.get_ui());
  const Residue d = static_cast<Residue>(den.get_ui());
  return field.mul(n, field.inv(d));
}

BigRational make_rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw InputError("rational with zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const BigRational& r) { return r.get_str(); }

}  // namespace greenkernel
