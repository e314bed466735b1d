#include "greenkernel/hopftower.hpp"

#include <initializer_list>
#include <tuple>

#include "greenkernel/once_cache.hpp"

namespace greenkernel {

namespace {

/// Moves f into a layout with more variables: variable v goes to slot var_map[v].
FpPoly relabel(const FpPoly& f, const LayoutPtr& target, std::span<const std::size_t> var_map) {
  std::vector<FpPoly::Term> raw;
  raw.reserve(f.num_terms());
  Exponents e(target->num_vars(), 0);
  for (const auto& [code, c] : f.terms()) {
    std::fill(e.begin(), e.end(), 0);
    bool ok = true;
    for (std::size_t v = 0; v < f.num_vars(); ++v) {
      const std::uint32_t x = f.layout()->exponent(code, v);
      e[var_map[v]] = x;
      ok = ok && x < target->caps()[var_map[v]];
    }
    if (ok) raw.emplace_back(target->encode(e), c);
  }
  return FpPoly::from_unsorted(f.ring(), target, std::move(raw));
}

std::vector<std::uint32_t> repeat_profile(const std::vector<std::uint32_t>& profile, std::size_t times) {
  std::vector<std::uint32_t> out;
  for (std::size_t t = 0; t < times; ++t) out.insert(out.end(), profile.begin(), profile.end());
  return out;
}

std::vector<std::size_t> block(std::size_t l, std::size_t start) {
  std::vector<std::size_t> out(l);
  for (std::size_t i = 0; i < l; ++i) out[i] = start + i;
  return out;
}

std::vector<FpPoly> variables(const PrimeField& f, const LayoutPtr& lay, std::size_t start, std::size_t l) {
  std::vector<FpPoly> out;
  for (std::size_t i = 0; i < l; ++i) out.push_back(FpPoly::variable(f, lay, start + i));
  return out;
}

bool satisfies_relations(const FpPoly& image, std::uint32_t q) { return image.pow(q).is_zero(); }

}  // namespace

HopfReport hopf_check(const HopfStructure& h) {
  HopfReport rep;
  const BorelAlgebra& a = *h.algebra;
  const PrimeField& f = a.field();
  const std::size_t l = a.num_generators();
  const auto& prof = a.profile();
  if (h.coproduct.size() != l || h.antipode.size() != l) throw InputError("Hopf data needs one image per generator");
  auto lay1 = a.layout();
  auto lay2 = make_layout(repeat_profile(prof, 2));
  auto lay3 = make_layout(repeat_profile(prof, 3));
  for (std::size_t i = 0; i < l; ++i) {
    if (!(*h.coproduct[i].layout() == *lay2) || !(*h.antipode[i].layout() == *lay1)) {
      throw InputError("Hopf data has the wrong caps");
    }
  }
  rep.well_defined = true;
  for (std::size_t i = 0; i < l; ++i) {
    rep.well_defined = rep.well_defined && satisfies_relations(h.coproduct[i], prof[i]) &&
                       satisfies_relations(h.antipode[i], prof[i]);
  }
  if (!rep.well_defined) return rep;

  // Coassociativity in three blocks of variables.
  std::vector<FpPoly> psi_left;
  std::vector<FpPoly> psi_right;
  std::vector<std::size_t> map01 = block(2 * l, 0);
  std::vector<std::size_t> map12 = block(2 * l, l);
  for (std::size_t i = 0; i < l; ++i) {
    psi_left.push_back(relabel(h.coproduct[i], lay3, map01));
    psi_right.push_back(relabel(h.coproduct[i], lay3, map12));
  }
  const auto x3 = variables(f, lay3, 0, l);
  const auto z3 = variables(f, lay3, 2 * l, l);
  rep.coassociative = true;
  for (std::size_t i = 0; i < l && rep.coassociative; ++i) {
    std::vector<FpPoly> left_img = psi_left;
    left_img.insert(left_img.end(), z3.begin(), z3.end());
    std::vector<FpPoly> right_img = x3;
    right_img.insert(right_img.end(), psi_right.begin(), psi_right.end());
    rep.coassociative = h.coproduct[i].substitute(left_img) == h.coproduct[i].substitute(right_img);
  }

  // Counit on each side, antipode on each side.
  const auto x1 = variables(f, lay1, 0, l);
  const FpPoly zero1(f, lay1);
  std::vector<FpPoly> eps_left(l, zero1);
  eps_left.insert(eps_left.end(), x1.begin(), x1.end());
  std::vector<FpPoly> eps_right = x1;
  eps_right.insert(eps_right.end(), l, zero1);
  std::vector<FpPoly> chi_left = h.antipode;
  chi_left.insert(chi_left.end(), x1.begin(), x1.end());
  std::vector<FpPoly> chi_right = x1;
  chi_right.insert(chi_right.end(), h.antipode.begin(), h.antipode.end());
  rep.counital = true;
  rep.antipode = true;
  for (std::size_t i = 0; i < l; ++i) {
    rep.counital = rep.counital && h.coproduct[i].substitute(eps_left) == x1[i] &&
                   h.coproduct[i].substitute(eps_right) == x1[i];
    rep.antipode = rep.antipode && h.coproduct[i].substitute(chi_left).is_zero() &&
                   h.coproduct[i].substitute(chi_right).is_zero();
  }

  // Cocommutativity: swap the two blocks.
  std::vector<std::size_t> swap = block(l, l);
  const auto front = block(l, 0);
  swap.insert(swap.end(), front.begin(), front.end());
  rep.cocommutative = true;
  for (std::size_t i = 0; i < l; ++i) {
    rep.cocommutative = rep.cocommutative && relabel(h.coproduct[i], lay2, swap) == h.coproduct[i];
  }
  return rep;
}

HopfStructure trivial_hopf(std::uint32_t p) { return HopfStructure{make_algebra(p, {}), {}, {}}; }

FglPtr level_fgl(std::uint32_t p, std::uint32_t n, std::uint32_t r) {
  const std::uint64_t cap = checked_power(checked_power(p, n), r);
  if (cap < 2) throw InputError("level 0 has no formal group law");
  return cached_fgl(p, n, static_cast<std::uint32_t>(cap));
}

HondaLevelPtr honda_level(std::uint32_t p, std::uint32_t n, std::uint32_t r) {
  static OnceCache<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, HondaLevel> cache;
  return cache.get({p, n, r}, [&] {
    HondaLevel lvl;
    if (r == 0) {
      lvl.params = make_honda_params(p, n, 2);
      lvl.r = 0;
      lvl.cap = 1;
      lvl.hopf = trivial_hopf(p);
      return lvl;
    }
    FglPtr fgl = level_fgl(p, n, r);
    lvl.params = fgl->params();
    lvl.r = r;
    lvl.cap = fgl->params().trunc;
    auto alg = make_algebra(p, {lvl.cap});
    lvl.hopf.algebra = alg;
    lvl.hopf.coproduct.push_back(fgl->law());
    lvl.hopf.antipode.push_back(fgl->inverse_series());
    return lvl;
  });
}

AlgebraMap multiplication_map(std::uint32_t p, std::uint32_t n, std::uint32_t a, std::int64_t m) {
  auto lvl = honda_level(p, n, a);
  if (a == 0) return identity_map(lvl->algebra());
  const FpPoly series = level_fgl(p, n, a)->m_series(m, lvl->cap);
  const Vec img = lvl->algebra()->from_poly(series);
  return algebra_map(lvl->algebra(), lvl->algebra(), std::vector<Vec>{img});
}

AlgebraMap tower_surjection(std::uint32_t p, std::uint32_t n, std::uint32_t a, std::uint32_t b) {
  if (b > a) throw InputError("tower surjection needs a >= b");
  auto src = honda_level(p, n, a);
  auto dst = honda_level(p, n, b);
  if (a == 0) return identity_map(src->algebra());
  const Vec img = b == 0 ? Vec{0} : dst->algebra()->generator(0);
  return algebra_map(src->algebra(), dst->algebra(), std::vector<Vec>{img});
}

AlgebraMap tower_injection(std::uint32_t p, std::uint32_t n, std::uint32_t s, std::uint32_t r) {
  auto src = honda_level(p, n, s);
  auto dst = honda_level(p, n, r + s);
  if (s == 0) {
    FpMatrix m(src->algebra()->field(), dst->algebra()->dim(), 1);
    m(0, 0) = 1;
    return AlgebraMap(src->algebra(), dst->algebra(), std::move(m), true, false);
  }
  const std::uint64_t qr = checked_power(checked_power(p, n), r);
  const Vec img = dst->algebra()->power(dst->algebra()->generator(0), qr);
  return algebra_map(src->algebra(), dst->algebra(), std::vector<Vec>{img});
}

TowerMaps tower_maps(std::uint32_t p, std::uint32_t n, std::uint32_t r, std::uint32_t s) {
  if (r < 1 || s < 1) throw InputError("tower maps need r, s >= 1");
  return TowerMaps{tower_surjection(p, n, r + s, r), tower_injection(p, n, s, r)};
}

bool is_hopf_map(const HopfStructure& source, const HopfStructure& target, const AlgebraMap& g) {
  const BorelAlgebra& a = *source.algebra;
  const BorelAlgebra& b = *target.algebra;
  if (g.source()->dim() != a.dim() || g.target()->dim() != b.dim()) throw InputError("map does not match Hopf data");
  const std::size_t la = a.num_generators();
  const std::size_t lb = b.num_generators();
  auto lay2b = make_layout(repeat_profile(b.profile(), 2));
  std::vector<FpPoly> images;
  for (std::size_t i = 0; i < la; ++i) images.push_back(b.to_poly(g.apply(a.generator(i))));
  std::vector<FpPoly> left;
  std::vector<FpPoly> right;
  const auto b0 = block(lb, 0);
  const auto b1 = block(lb, lb);
  for (const auto& img : images) {
    left.push_back(relabel(img, lay2b, b0));
    right.push_back(relabel(img, lay2b, b1));
  }
  std::vector<FpPoly> gg = left;
  gg.insert(gg.end(), right.begin(), right.end());
  for (std::size_t i = 0; i < la; ++i) {
    // psi_B(g(x)) vs (g (x) g)(psi_A(x)).
    const FpPoly lhs = images[i].substitute(target.coproduct);
    const FpPoly rhs = source.coproduct[i].substitute(gg);
    if (!(lhs == rhs)) return false;
    // chi_B(g(x)) vs g(chi_A(x)).
    if (!(images[i].substitute(target.antipode) == source.antipode[i].substitute(images))) return false;
  }
  return true;
}

bool PdivReport::all() const {
  bool ok = kernel_is_ideal && p_power_vanishes && surj_hopf && inj_hopf && surj_onto && inj_into;
  for (const auto& [name, pass] : squares) ok = ok && pass;
  return ok;
}

PdivReport pdiv_check(std::uint32_t p, std::uint32_t n, std::uint32_t r, std::uint32_t s,
                      std::size_t budget) {
  if (r < 1 || s < 1) throw InputError("pdiv_check needs r, s >= 1");
  const std::uint64_t q = checked_power(p, n);
  const std::uint64_t top = checked_power(q, r + s);
  if (top > budget) throw BudgetError("p-divisibility check exceeds the size budget", top);
  PdivReport rep;

  const auto maps = tower_maps(p, n, r, s);
  auto hrs = honda_level(p, n, r + s);
  auto hr = honda_level(p, n, r);
  auto hs = honda_level(p, n, s);
  const PrimeField& f = hrs->algebra()->field();
  const std::int64_t pr = static_cast<std::int64_t>(checked_power(p, r));

  // (i) kernel of the surjection versus the ideal generated by [p^r](x_{r+s}).
  const auto kernel = mat_kernel(maps.surj.matrix());
  const Vec gen = multiplication_map(p, n, r + s, pr).apply(hrs->algebra()->generator(0));
  std::vector<Vec> ideal;
  for (std::size_t j = 0; j < hrs->algebra()->dim(); ++j) {
    ideal.push_back(hrs->algebra()->mul(gen, hrs->algebra()->basis_vector(j)));
  }
  ideal = span_basis(f, hrs->algebra()->dim(), ideal);
  rep.kernel_dim = kernel.size();
  rep.ideal_dim = ideal.size();
  rep.kernel_is_ideal = same_span(f, hrs->algebra()->dim(), kernel, ideal);

  // (ii) [p^r] kills x_r.
  rep.p_power_vanishes = level_fgl(p, n, r)->m_series(pr, hr->cap).is_zero();

  rep.surj_hopf = is_hopf_map(hrs->hopf, hr->hopf, maps.surj);
  rep.inj_hopf = is_hopf_map(hs->hopf, hrs->hopf, maps.inj);
  rep.surj_onto = maps.surj.matrix().rank() == hr->algebra()->dim();
  rep.inj_into = maps.inj.matrix().rank() == hs->algebra()->dim();

  // (iii) compatibility diagrams. Every arrow is an algebra map out of a monogenic algebra,
  // so each square is decided by where the two composites send the generator.
  auto surj = [&](std::uint32_t a, std::uint32_t b) { return tower_surjection(p, n, a, b); };
  auto inj = [&](std::uint32_t from, std::uint32_t shift) { return tower_injection(p, n, from, shift); };
  auto mult = [&](std::uint32_t a, std::int64_t m) { return multiplication_map(p, n, a, m); };
  // Applies the maps left to right to the generator of the first source.
  auto chain = [](std::initializer_list<AlgebraMap> maps) {
    const auto& src = *std::dynamic_pointer_cast<const BorelAlgebra>(maps.begin()->source());
    Vec v = src.generator(0);
    for (const auto& m : maps) v = m.apply(v);
    return v;
  };
  const std::int64_t pr1 = pr * static_cast<std::int64_t>(p);
  const std::uint32_t t = r + s;

  rep.squares.emplace_back("[p^r] factors through level s", chain({mult(t, pr)}) == chain({surj(t, s), inj(s, r)}));
  rep.squares.emplace_back("first diagram, left square",
                           chain({surj(t + 1, t), surj(t, r)}) == chain({surj(t + 1, r)}));
  rep.squares.emplace_back("first diagram, right square",
                           chain({inj(s + 1, r), surj(t + 1, t)}) == chain({surj(s + 1, s), inj(s, r)}));
  rep.squares.emplace_back("first diagram, [p^r] square",
                           chain({mult(t + 1, pr), surj(t + 1, t)}) == chain({surj(t + 1, t), mult(t, pr)}));
  rep.squares.emplace_back("second diagram, left square",
                           chain({surj(t + 1, r + 1), surj(r + 1, r)}) == chain({surj(t + 1, t), surj(t, r)}));
  rep.squares.emplace_back("second diagram, right square",
                           chain({inj(s, r + 1), surj(t + 1, t)}) == chain({mult(s, p), inj(s, r)}));
  rep.squares.emplace_back("second diagram, [p^r] square",
                           chain({mult(t + 1, p), surj(t + 1, t), mult(t, pr)}) ==
                               chain({mult(t + 1, pr1), surj(t + 1, t)}));
  return rep;
}

std::vector<Vec> integrals(const LocalAlgebra& h) {
  const PrimeField& f = h.field();
  const std::size_t d = h.dim();
  std::vector<Vec> current;
  for (std::size_t i = 0; i < d; ++i) current.push_back(unit_vector(d, i));
  for (std::size_t i = 0; i < d && !current.empty(); ++i) {
    const Vec x = h.basis_vector(i);
    const Residue ax = h.aug(x);
    // Columns (x - aug(x)) k for k in the current space; keep combinations mapping to 0.
    std::vector<Vec> cols;
    for (const auto& k : current) cols.push_back(vec_sub(f, h.mul(x, k), vec_scale(f, ax, k)));
    const auto combos = mat_kernel(FpMatrix::from_columns(f, d, cols));
    std::vector<Vec> next;
    for (const auto& c : combos) {
      Vec z(d, 0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] != 0) z = vec_add(f, z, vec_scale(f, c[j], current[j]));
      }
      next.push_back(std::move(z));
    }
    current = span_basis(f, d, next);
  }
  return current;
}

}  // namespace greenkernel
