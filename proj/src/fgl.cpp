#include "greenkernel/fgl.hpp"

#include <algorithm>
#include <bit>
#include <tuple>

#include "greenkernel/once_cache.hpp"

namespace greenkernel {

std::uint64_t checked_power(std::uint64_t p, std::uint32_t e) {
  std::uint64_t out = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    out *= p;
    if (out > 0xffffffffull) throw BudgetError("prime power too large", 0);
  }
  return out;
}

HondaParams make_honda_params(std::uint32_t p, std::uint32_t n, std::uint32_t trunc) {
  if (!is_prime(p) || p >= (1u << 16)) throw InputError("p must be a prime below 65536");
  if (n < 1) throw InputError("height n must be at least 1");
  if (trunc < 2) throw InputError("truncation must be at least 2");
  HondaParams hp;
  hp.p = p;
  hp.n = n;
  hp.q = checked_power(p, n);
  hp.trunc = trunc;
  return hp;
}

QPoly honda_log(const HondaParams& params) {
  RationalField qq;
  auto lay = make_layout({params.trunc});
  QPoly out(qq, lay);
  std::uint64_t deg = 1;
  mpz_class denom = 1;
  while (deg < params.trunc) {
    out.add_term(Exponents{static_cast<std::uint32_t>(deg)}, make_rational(1, denom));
    deg *= params.q;
    denom *= params.p;
  }
  return out;
}

template <class Ring>
TruncPoly<Ring> series_derivative(const TruncPoly<Ring>& f) {
  if (f.num_vars() != 1) throw InputError("series_derivative expects one variable");
  TruncPoly<Ring> out(f.ring(), f.layout());
  for (const auto& [exps, c] : f.graded_terms()) {
    if (exps[0] == 0) continue;
    out.add_term(Exponents{exps[0] - 1}, f.ring().mul(c, f.ring().from_int(exps[0])));
  }
  return out;
}

namespace {

template <class Ring>
typename Ring::value_type ring_inverse(const Ring& ring, const typename Ring::value_type& c) {
  if constexpr (std::is_same_v<Ring, PrimeField>) {
    return ring.inv(c);
  } else {
    return BigRational(1) / c;
  }
}

}  // namespace

template <class Ring>
TruncPoly<Ring> series_inverse(const TruncPoly<Ring>& u) {
  if (u.num_vars() != 1) throw InputError("series_inverse expects one variable");
  const Ring& ring = u.ring();
  const auto c0 = u.coefficient(Exponents{0});
  if (ring.is_zero(c0)) throw InputError("series without constant term is not invertible");
  auto v = TruncPoly<Ring>::constant(ring, u.layout(), ring_inverse(ring, c0));
  const auto two = TruncPoly<Ring>::constant(ring, u.layout(), ring.from_int(2));
  // Newton: each step doubles the number of correct coefficients.
  for (std::uint32_t prec = 1; prec < u.caps()[0]; prec *= 2) v = v * (two - u * v);
  return v;
}

QPoly series_reversion(const QPoly& f, std::uint32_t cap) {
  RationalField qq;
  auto lay = make_layout({cap});
  const QPoly fc = f.recapped(lay);
  if (fc.coefficient(Exponents{0}) != 0 || fc.coefficient(Exponents{1}) != 1) {
    throw InputError("series_reversion expects x + O(x^2)");
  }
  const QPoly df = series_derivative(fc);
  QPoly z = QPoly::variable(qq, lay, 0);
  QPoly e = z;
  // Newton on f(e) = z: e <- e - (f(e) - z) / f'(e), doubling precision.
  for (std::uint32_t prec = 2; prec < 2 * cap; prec *= 2) {
    std::vector<QPoly> img{e};
    const QPoly residual = fc.substitute(img) - z;
    if (residual.is_zero()) break;
    e = e - residual * series_inverse(df.substitute(img));
  }
  std::vector<QPoly> img{e};
  if (!(fc.substitute(img) == z)) throw InvariantError("series reversion did not converge");
  return e;
}

Fgl::Fgl(HondaParams params, FpPoly law)
    : params_(params), field_(params.p), law_(std::move(law)), inverse_(field_, make_layout({params.trunc})) {
  if (law_.num_vars() != 2 || law_.caps()[0] != params_.trunc || law_.caps()[1] != params_.trunc) {
    throw InputError("formal group law must have caps (D, D)");
  }
  auto lay = inverse_.layout();
  const FpPoly x = FpPoly::variable(field_, lay, 0);
  // Partial derivative in y.
  FpPoly fy(field_, law_.layout());
  for (const auto& [code, c] : law_.terms()) {
    Exponents e = law_.layout()->decode(code);
    if (e[1] == 0) continue;
    const Residue k = field_.from_int(e[1]);
    e[1] -= 1;
    fy.add_term(e, field_.mul(c, k));
  }
  // Newton in y for F(x, y) = 0 starting from y = -x.
  FpPoly iota = -x;
  const std::size_t max_steps = 2 + static_cast<std::size_t>(std::bit_width(params_.trunc));
  for (std::size_t step = 0; step <= max_steps; ++step) {
    std::vector<FpPoly> img{x, iota};
    const FpPoly value = law_.substitute(img);
    if (value.is_zero()) {
      inverse_ = iota;
      return;
    }
    iota = iota - value * series_inverse(fy.substitute(img));
  }
  throw InvariantError("formal inverse did not converge");
}

FpPoly Fgl::add(const FpPoly& a, const FpPoly& b) const {
  std::vector<FpPoly> img{a, b};
  return law_.substitute(img);
}

FpPoly Fgl::negate(const FpPoly& a) const {
  std::vector<FpPoly> img{a};
  return inverse_.substitute(img);
}

FpPoly Fgl::m_series(std::int64_t m, std::uint32_t cap) const {
  if (cap > params_.trunc) throw InputError("m_series cap exceeds the law's truncation");
  if (cap == 0) throw InputError("m_series cap must be positive");
  auto lay = make_layout({cap});
  const FpPoly x = FpPoly::variable(field_, lay, 0);
  const std::uint64_t mag = m < 0 ? static_cast<std::uint64_t>(-(m + 1)) + 1 : static_cast<std::uint64_t>(m);
  FpPoly acc(field_, lay);
  // Double-and-add from the most significant bit.
  for (int bit = 63; bit >= 0; --bit) {
    if (!acc.is_zero()) acc = add(acc, acc);
    if ((mag >> bit) & 1u) acc = acc.is_zero() ? x : add(acc, x);
  }
  return m < 0 ? negate(acc) : acc;
}

Fgl honda_fgl(const HondaParams& params) {
  if (params.trunc < params.q) throw InputError("truncation must be at least q = p^n");
  const std::uint32_t d = params.trunc;
  const QPoly log = honda_log(params);
  // exp needs the logarithm through degree 2D - 2, not just below D.
  HondaParams wide = params;
  wide.trunc = 2 * d - 1;
  const QPoly exp = series_reversion(honda_log(wide), 2 * d - 1);

  // L[j] = coefficients of log^j (cap D); F = L^T C L with C[j][m] = e_{j+m} binom(j+m, j).
  std::vector<std::vector<BigRational>> lpow(d, std::vector<BigRational>(d, 0));
  QPoly power = QPoly::constant(RationalField{}, log.layout(), 1);
  for (std::uint32_t j = 0; j < d; ++j) {
    for (const auto& [code, c] : power.terms()) lpow[j][log.layout()->exponent(code, 0)] = c;
    power = power * log;
  }
  std::vector<BigRational> ecoef(2 * d - 1, 0);
  for (const auto& [code, c] : exp.terms()) ecoef[exp.layout()->exponent(code, 0)] = c;

  // T[j][b] = sum_m C[j][m] L[m][b]; binom(j+m, j) computed via mpz.
  std::vector<std::vector<BigRational>> t(d, std::vector<BigRational>(d, 0));
  mpz_class binom;
  for (std::uint32_t j = 0; j < d; ++j) {
    for (std::uint32_t m = 0; m < d; ++m) {
      if (ecoef[j + m] == 0) continue;
      mpz_bin_uiui(binom.get_mpz_t(), j + m, j);
      const BigRational cjm = ecoef[j + m] * BigRational(binom);
      // L[m][b] = 0 for b < m.
      for (std::uint32_t b = m; b < d; ++b) {
        if (lpow[m][b] != 0) t[j][b] += cjm * lpow[m][b];
      }
    }
  }
  const PrimeField field(params.p);
  auto lay = make_layout({d, d});
  std::vector<FpPoly::Term> raw;
  for (std::uint32_t a = 0; a < d; ++a) {
    for (std::uint32_t b = 0; b < d; ++b) {
      BigRational s = 0;
      for (std::uint32_t j = 0; j <= a; ++j) {
        if (lpow[j][a] != 0 && t[j][b] != 0) s += lpow[j][a] * t[j][b];
      }
      if (s == 0) continue;
      // Throws InvariantError when a coefficient fails to be p-integral.
      const Residue r = reduce_mod_p(s, field);
      if (r != 0) raw.emplace_back(lay->encode(Exponents{a, b}), r);
    }
  }
  return Fgl(params, FpPoly::from_unsorted(field, lay, std::move(raw)));
}

FglPtr cached_fgl(std::uint32_t p, std::uint32_t n, std::uint32_t trunc) {
  static OnceCache<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Fgl> cache;
  return cache.get({p, n, trunc}, [&] { return honda_fgl(make_honda_params(p, n, trunc)); });
}

template FpPoly series_inverse(const FpPoly&);
template QPoly series_inverse(const QPoly&);
template FpPoly series_derivative(const FpPoly&);
template QPoly series_derivative(const QPoly&);

}  // namespace greenkernel
