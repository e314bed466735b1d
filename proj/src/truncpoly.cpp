#include "greenkernel/truncpoly.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <sstream>
#include <type_traits>

#include "greenkernel/error.hpp"

namespace greenkernel {

MonomialLayout::MonomialLayout(std::vector<std::uint32_t> caps) : caps_(std::move(caps)) {
  const std::size_t k = caps_.size();
  shift_.resize(k);
  mask_.resize(k);
  stride_.resize(k);
  std::uint32_t total_bits = 0;
  std::vector<std::uint32_t> widths(k);
  for (std::size_t v = 0; v < k; ++v) {
    if (caps_[v] == 0) throw InputError("monomial cap must be positive");
    // Field holds exponents up to 2*(cap-1).
    const std::uint64_t max_field = 2ull * (caps_[v] - 1);
    widths[v] = max_field == 0 ? 1 : static_cast<std::uint32_t>(std::bit_width(max_field));
    total_bits += widths[v];
  }
  if (total_bits > 64) throw BudgetError("monomial layout does not fit in 64 bits", total_bits);
  std::uint32_t shift = 0;
  for (std::size_t v = k; v-- > 0;) {
    shift_[v] = shift;
    mask_[v] = (widths[v] == 64) ? ~0ull : ((1ull << widths[v]) - 1);
    shift += widths[v];
  }
  std::uint64_t stride = 1;
  for (std::size_t v = k; v-- > 0;) {
    stride_[v] = stride;
    if (stride > std::numeric_limits<std::uint64_t>::max() / caps_[v]) {
      throw BudgetError("monomial space too large", 0);
    }
    stride *= caps_[v];
  }
  space_ = stride;
}

std::uint64_t MonomialLayout::encode(std::span<const std::uint32_t> exps) const {
  if (exps.size() != caps_.size()) throw InputError("exponent vector has wrong length");
  std::uint64_t code = 0;
  for (std::size_t v = 0; v < exps.size(); ++v) {
    if (exps[v] > mask_[v]) throw InputError("exponent too large for layout");
    code |= static_cast<std::uint64_t>(exps[v]) << shift_[v];
  }
  return code;
}

Exponents MonomialLayout::decode(std::uint64_t code) const {
  Exponents e(caps_.size());
  for (std::size_t v = 0; v < caps_.size(); ++v) e[v] = exponent(code, v);
  return e;
}

std::uint32_t MonomialLayout::degree(std::uint64_t code) const noexcept {
  std::uint32_t d = 0;
  for (std::size_t v = 0; v < caps_.size(); ++v) d += exponent(code, v);
  return d;
}

std::uint64_t MonomialLayout::dense_index(std::uint64_t code) const noexcept {
  std::uint64_t idx = 0;
  for (std::size_t v = 0; v < caps_.size(); ++v) idx += exponent(code, v) * stride_[v];
  return idx;
}

std::uint64_t MonomialLayout::code_of_dense(std::uint64_t index) const noexcept {
  std::uint64_t code = 0;
  for (std::size_t v = 0; v < caps_.size(); ++v) {
    const std::uint64_t e = index / stride_[v];
    index -= e * stride_[v];
    code |= e << shift_[v];
  }
  return code;
}

LayoutPtr make_layout(std::vector<std::uint32_t> caps) {
  return std::make_shared<const MonomialLayout>(std::move(caps));
}

namespace {

constexpr std::uint64_t kDenseLimit = 1ull << 22;

template <class Ring>
constexpr bool is_prime_field = std::is_same_v<Ring, PrimeField>;

}  // namespace

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::constant(Ring ring, LayoutPtr layout, Coef c) {
  TruncPoly out(std::move(ring), std::move(layout));
  if (!out.ring_.is_zero(c)) out.terms_.emplace_back(0, std::move(c));
  return out;
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::variable(Ring ring, LayoutPtr layout, std::size_t var) {
  Exponents e(layout->num_vars(), 0);
  if (var >= e.size()) throw InputError("variable index out of range");
  e[var] = 1;
  Coef one = ring.one();
  return monomial(std::move(ring), std::move(layout), e, one);
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::monomial(Ring ring, LayoutPtr layout,
                                          std::span<const std::uint32_t> exps, Coef c) {
  TruncPoly out(std::move(ring), std::move(layout));
  out.add_term(exps, c);
  return out;
}

template <class Ring>
void TruncPoly<Ring>::check_compatible(const TruncPoly& o) const {
  if (!(*layout_ == *o.layout_)) throw InputError("polynomials have mismatched caps");
  if (!(ring_ == o.ring_)) throw InputError("polynomials have mismatched coefficient rings");
}

template <class Ring>
typename TruncPoly<Ring>::Coef TruncPoly<Ring>::coefficient_code(std::uint64_t code) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), code,
                             [](const Term& t, std::uint64_t c) { return t.first < c; });
  if (it != terms_.end() && it->first == code) return it->second;
  return ring_.zero();
}

template <class Ring>
typename TruncPoly<Ring>::Coef TruncPoly<Ring>::coefficient(
    std::span<const std::uint32_t> exps) const {
  for (std::size_t v = 0; v < exps.size(); ++v) {
    if (v < caps().size() && exps[v] >= caps()[v]) return ring_.zero();
  }
  return coefficient_code(layout_->encode(exps));
}

template <class Ring>
void TruncPoly<Ring>::add_term(std::span<const std::uint32_t> exps, const Coef& c) {
  if (exps.size() != num_vars()) throw InputError("exponent vector has wrong length");
  for (std::size_t v = 0; v < exps.size(); ++v) {
    if (exps[v] >= caps()[v]) return;
  }
  if (ring_.is_zero(c)) return;
  const std::uint64_t code = layout_->encode(exps);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), code,
                             [](const Term& t, std::uint64_t k) { return t.first < k; });
  if (it != terms_.end() && it->first == code) {
    it->second = ring_.add(it->second, c);
    if (ring_.is_zero(it->second)) terms_.erase(it);
  } else {
    terms_.insert(it, Term{code, c});
  }
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::from_unsorted(Ring ring, LayoutPtr layout, std::vector<Term> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  TruncPoly out(std::move(ring), std::move(layout));
  for (auto& t : raw) {
    if (!out.terms_.empty() && out.terms_.back().first == t.first) {
      out.terms_.back().second = out.ring_.add(out.terms_.back().second, t.second);
    } else {
      out.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(out.terms_, [&](const Term& t) { return out.ring_.is_zero(t.second); });
  return out;
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::operator+(const TruncPoly& o) const {
  check_compatible(o);
  TruncPoly out(ring_, layout_);
  out.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      out.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
      out.terms_.push_back(o.terms_[j++]);
    } else {
      Coef s = ring_.add(terms_[i].second, o.terms_[j].second);
      if (!ring_.is_zero(s)) out.terms_.emplace_back(terms_[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::operator-() const {
  TruncPoly out(*this);
  for (auto& t : out.terms_) t.second = ring_.neg(t.second);
  return out;
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::operator-(const TruncPoly& o) const {
  return *this + (-o);
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::scaled(const Coef& c) const {
  if (ring_.is_zero(c)) return TruncPoly(ring_, layout_);
  TruncPoly out(*this);
  for (auto& t : out.terms_) t.second = ring_.mul(t.second, c);
  std::erase_if(out.terms_, [&](const Term& t) { return ring_.is_zero(t.second); });
  return out;
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::operator*(const TruncPoly& o) const {
  check_compatible(o);
  TruncPoly out(ring_, layout_);
  if (terms_.empty() || o.terms_.empty()) return out;
  const MonomialLayout& lay = *layout_;

  if constexpr (is_prime_field<Ring>) {
    const std::uint64_t work = static_cast<std::uint64_t>(terms_.size()) * o.terms_.size();
    const std::uint64_t space = lay.space();
    if (space <= kDenseLimit && work * 4 >= space) {
      const std::uint64_t p = ring_.p();
      std::vector<std::uint64_t> acc(space, 0);
      std::vector<std::uint64_t> dense_b(o.terms_.size());
      for (const auto& [ca, va] : terms_) {
        const std::uint64_t a = va;
        for (const auto& [cb, vb] : o.terms_) {
          const std::uint64_t code = ca + cb;
          if (!lay.within_caps(code)) continue;
          acc[lay.dense_index(code)] += a * vb;
        }
      }
      for (std::uint64_t idx = 0; idx < space; ++idx) {
        const std::uint64_t v = acc[idx] % p;
        if (v != 0) out.terms_.emplace_back(lay.code_of_dense(idx), static_cast<Residue>(v));
      }
      // code_of_dense preserves order because variable 0 is the most significant in both.
      return out;
    }
  }

  std::vector<Term> raw;
  raw.reserve(std::min<std::size_t>(terms_.size() * o.terms_.size(), 1u << 20));
  for (const auto& [ca, va] : terms_) {
    for (const auto& [cb, vb] : o.terms_) {
      const std::uint64_t code = ca + cb;
      if (!lay.within_caps(code)) continue;
      raw.emplace_back(code, ring_.mul(va, vb));
    }
  }
  return from_unsorted(ring_, layout_, std::move(raw));
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::pow(std::uint64_t e) const {
  TruncPoly result = constant(ring_, layout_, ring_.one());
  TruncPoly base = *this;
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
    if (base.is_zero() && e != 0) return TruncPoly(ring_, layout_);
  }
  return result;
}

template <class Ring>
bool TruncPoly<Ring>::operator==(const TruncPoly& o) const {
  if (!(*layout_ == *o.layout_)) return false;
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].first != o.terms_[i].first) return false;
    if (!ring_.is_zero(ring_.sub(terms_[i].second, o.terms_[i].second))) return false;
  }
  return true;
}

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::recapped(LayoutPtr target) const {
  if (target->num_vars() != num_vars()) throw InputError("recapped: variable count mismatch");
  std::vector<Term> raw;
  raw.reserve(terms_.size());
  for (const auto& [code, c] : terms_) {
    const Exponents e = layout_->decode(code);
    bool ok = true;
    for (std::size_t v = 0; v < e.size(); ++v) ok = ok && e[v] < target->caps()[v];
    if (ok) raw.emplace_back(target->encode(e), c);
  }
  return from_unsorted(ring_, std::move(target), std::move(raw));
}

namespace {

/// Lazily computed powers of one substituted image.
template <class Ring>
class PowerCache {
 public:
  explicit PowerCache(const TruncPoly<Ring>& base) : base_(base) {
    powers_.push_back(TruncPoly<Ring>::constant(base.ring(), base.layout(), base.ring().one()));
    powers_.push_back(base);
  }

  const TruncPoly<Ring>& get(std::uint64_t e) {
    while (powers_.size() <= e) {
      const std::uint64_t k = powers_.size();
      if (powers_.back().is_zero()) {
        powers_.push_back(powers_.back());
        continue;
      }
      if constexpr (is_prime_field<Ring>) {
        const std::uint64_t p = base_.ring().p();
        if (k >= p) {
          // In characteristic p over F_p: g^{p*j + d} = g^j(x^p) * g^d.
          TruncPoly<Ring> frob = frobenius(get(k / p));
          powers_.push_back(frob * get(k % p));
          continue;
        }
      }
      powers_.push_back(powers_.back() * base_);
    }
    return powers_[e];
  }

 private:
  TruncPoly<Ring> frobenius(const TruncPoly<Ring>& g) const {
    const auto& lay = *g.layout();
    const std::uint32_t p = g.ring().p();
    std::vector<typename TruncPoly<Ring>::Term> raw;
    for (const auto& [code, c] : g.terms()) {
      Exponents e = lay.decode(code);
      bool ok = true;
      for (std::size_t v = 0; v < e.size(); ++v) {
        e[v] *= p;
        ok = ok && e[v] < lay.caps()[v];
      }
      if (ok) raw.emplace_back(lay.encode(e), c);
    }
    return TruncPoly<Ring>::from_unsorted(g.ring(), g.layout(), std::move(raw));
  }

  const TruncPoly<Ring>& base_;
  std::vector<TruncPoly<Ring>> powers_;
};

template <class Ring>
TruncPoly<Ring> substitute_range(const TruncPoly<Ring>& poly,
                                 std::span<const typename TruncPoly<Ring>::Term> terms,
                                 std::size_t var, std::vector<PowerCache<Ring>>& caches,
                                 const LayoutPtr& target) {
  const auto& ring = poly.ring();
  const auto& lay = *poly.layout();
  if (var == lay.num_vars()) {
    // All exponents fixed: a single term.
    return TruncPoly<Ring>::constant(ring, target, terms.front().second);
  }
  TruncPoly<Ring> result(ring, target);
  std::size_t i = 0;
  while (i < terms.size()) {
    const std::uint32_t e = lay.exponent(terms[i].first, var);
    std::size_t j = i;
    while (j < terms.size() && lay.exponent(terms[j].first, var) == e) ++j;
    const auto& pw = caches[var].get(e);
    if (!pw.is_zero()) {
      TruncPoly<Ring> inner = substitute_range(poly, terms.subspan(i, j - i), var + 1, caches, target);
      if (!inner.is_zero()) result = result + (e == 0 ? inner : pw * inner);
    }
    i = j;
  }
  return result;
}

}  // namespace

template <class Ring>
TruncPoly<Ring> TruncPoly<Ring>::substitute(std::span<const TruncPoly> images) const {
  if (images.size() != num_vars()) throw InputError("substitute: need one image per variable");
  if (images.empty()) return *this;
  const LayoutPtr target = images.front().layout();
  for (const auto& img : images) {
    if (!(*img.layout() == *target)) throw InputError("substitute: images have mismatched caps");
  }
  if (terms_.empty()) return TruncPoly(ring_, target);
  std::vector<PowerCache<Ring>> caches;
  caches.reserve(images.size());
  for (const auto& img : images) caches.emplace_back(img);
  // Terms are sorted lexicographically, so equal leading exponents are contiguous.
  return substitute_range(*this, std::span<const Term>(terms_), 0, caches, target);
}

template <class Ring>
std::uint32_t TruncPoly<Ring>::valuation() const noexcept {
  std::uint32_t v = std::numeric_limits<std::uint32_t>::max();
  for (const auto& t : terms_) v = std::min(v, layout_->degree(t.first));
  return v;
}

template <class Ring>
std::vector<std::pair<Exponents, typename TruncPoly<Ring>::Coef>> TruncPoly<Ring>::graded_terms()
    const {
  std::vector<std::pair<Exponents, Coef>> out;
  out.reserve(terms_.size());
  for (const auto& [code, c] : terms_) out.emplace_back(layout_->decode(code), c);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    std::uint32_t da = 0;
    std::uint32_t db = 0;
    for (auto x : a.first) da += x;
    for (auto x : b.first) db += x;
    if (da != db) return da < db;
    return a.first > b.first;
  });
  return out;
}

namespace {

std::vector<std::string> default_names(std::size_t k) {
  static const char* small[] = {"x", "y", "z", "w"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) {
    names.push_back(k <= 4 ? std::string(small[i]) : "x" + std::to_string(i + 1));
  }
  return names;
}

template <class C>
std::string coef_string(const C& c) {
  if constexpr (std::is_same_v<C, BigRational>) {
    return c.get_str();
  } else {
    return std::to_string(c);
  }
}

}  // namespace

template <class Ring>
std::string TruncPoly<Ring>::to_string(std::span<const std::string> var_names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [exps, c] : graded_terms()) {
    std::string cs = coef_string(c);
    const bool negative = cs.front() == '-';
    if (negative) cs.erase(0, 1);
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::ostringstream mono;
    bool any = false;
    for (std::size_t v = 0; v < exps.size(); ++v) {
      if (exps[v] == 0) continue;
      if (any) mono << '*';
      mono << var_names[v];
      if (exps[v] > 1) mono << '^' << exps[v];
      any = true;
    }
    if (!any) {
      os << cs;
    } else if (cs == "1") {
      os << mono.str();
    } else {
      os << cs << '*' << mono.str();
    }
  }
  return os.str();
}

template <class Ring>
std::string TruncPoly<Ring>::to_string() const {
  const auto names = default_names(num_vars());
  return to_string(names);
}

template class TruncPoly<PrimeField>;
template class TruncPoly<RationalField>;

FpPoly reduce_mod_p(const QPoly& poly, const PrimeField& field) {
  std::vector<FpPoly::Term> raw;
  raw.reserve(poly.num_terms());
  for (const auto& [code, c] : poly.terms()) raw.emplace_back(code, reduce_mod_p(c, field));
  return FpPoly::from_unsorted(field, poly.layout(), std::move(raw));
}

}  // namespace greenkernel
