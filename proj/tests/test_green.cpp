#include <gtest/gtest.h>

#include <random>

#include "greenkernel/error.hpp"
#include "greenkernel/green.hpp"
#include "greenkernel/hopftower.hpp"

using namespace greenkernel;

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

GreenParams params(std::uint32_t p, std::uint32_t n = 1) { return make_green_params(p, n); }

Vec monomial(const GreenValue& v, Exponents e) { return unit_vector(v.borel->dim(), v.borel->index_of(e)); }

std::vector<Vec> all_elements(std::uint32_t p, std::size_t d) {
  std::vector<Vec> out;
  Vec v(d, 0);
  while (true) {
    out.push_back(v);
    std::size_t i = 0;
    while (i < d && ++v[i] == p) v[i++] = 0;
    if (i == d) break;
  }
  return out;
}

// ind^G_1(1) by brute force: the unique z with lambda_G(a z) = aug(a) for every a.
Vec brute_force_ind_one(const GreenValue& v) {
  const LocalAlgebra& a = *v.algebra;
  Vec found;
  for (const auto& z : all_elements(a.field().p(), a.dim())) {
    bool ok = true;
    for (std::size_t i = 0; i < a.dim() && ok; ++i) ok = v.form(a.mul(a.basis_vector(i), z)) == a.aug(a.basis_vector(i));
    if (ok) {
      EXPECT_TRUE(found.empty());
      found = z;
    }
  }
  return found;
}

std::shared_ptr<const AbelianPGroup> cyc(std::uint32_t p, std::vector<std::uint32_t> t) { return cyclic_product(p, std::move(t)); }

// Matrix of the automorphism x |-> iota(x) of F_p[x]/(x^q), built from powers of iota.
FpMatrix inversion_matrix(std::uint32_t p, std::uint32_t n) {
  auto lvl = honda_level(p, n, 1);
  const BorelAlgebra& a = *lvl->algebra();
  const FpPoly iota = lvl->hopf.antipode[0];
  FpMatrix m(a.field(), a.dim(), a.dim());
  FpPoly power = FpPoly::constant(a.field(), a.layout(), 1);
  for (std::size_t k = 0; k < a.dim(); ++k) {
    m.set_column(k, a.from_poly(power));
    power = power * iota;
  }
  return m;
}

}  // namespace

TEST(ValueAbelian, Examples) {
  auto c3 = value_abelian({1}, params(3));
  EXPECT_EQ(c3->algebra->dim(), 3u);
  EXPECT_EQ(c3->ind_one, monomial(*c3, {2}));
  EXPECT_EQ(c3->ind_one, brute_force_ind_one(*c3));
  EXPECT_EQ(value_abelian({1, 1}, params(2))->algebra->dim(), 4u);
  auto triv = value_abelian({}, params(5));
  EXPECT_EQ(triv->algebra->dim(), 1u);
  EXPECT_EQ(triv->ind_one, (Vec{1}));
  EXPECT_EQ(value_abelian({2, 1}, params(2))->label, "C4 x C2");
}

TEST(ValueAbelian, KunnethDimensionsAndSocle) {
  for (std::uint32_t p : {2u, 3u}) {
    for (const auto& t : std::vector<std::vector<std::uint32_t>>{{1}, {2}, {1, 1}, {2, 1}, {1, 1, 1}, {3}, {2, 2}}) {
      std::uint64_t expect = 1;
      for (auto r : t) expect *= checked_power(p, r);
      if (expect > 256) continue;
      auto v = value_abelian(t, params(p));
      EXPECT_EQ(v->algebra->dim(), expect);
      EXPECT_EQ(socle_basis(*v->algebra).size(), 1u);
      EXPECT_TRUE(in_span(v->algebra->field(), v->algebra->dim(), socle_basis(*v->algebra), v->ind_one));
      EXPECT_FALSE(vec_is_zero(v->ind_one));
    }
  }
}

TEST(ValueAbelian, BudgetExceeded) {
  try {
    value_abelian({3, 3}, params(3));
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.required(), 729u);
  }
  EXPECT_THROW(make_green_params(4, 1), InputError);
  EXPECT_THROW(make_green_params(3, 2, 8), InputError);
}

TEST(Restrict, TowerMapsAreRestrictions) {
  for (std::uint32_t p : {2u, 3u}) {
    const auto gp = params(p);
    auto c1 = cyc(p, {1});
    auto c2 = cyc(p, {2});
    // Quotient C_{p^2} -> C_p sends the generator to the generator: x_1 |-> x_2^q.
    const auto quotient = restrict(hom_from_matrix(c2, c1, {{1}}), gp);
    EXPECT_EQ(quotient.matrix(), tower_injection(p, 1, 1, 1).matrix());
    // Inclusion C_p -> C_{p^2} sends the generator to p times the generator: x_2 |-> x_1.
    const auto inclusion = restrict(hom_from_matrix(c1, c2, {{p}}), gp);
    EXPECT_EQ(inclusion.matrix(), tower_surjection(p, 1, 2, 1).matrix());
  }
}

TEST(Restrict, MultiplicationByTwoOnC3) {
  const auto gp = params(3);
  auto c3 = cyc(3, {1});
  const auto two = restrict(hom_from_matrix(c3, c3, {{2}}), gp);
  EXPECT_EQ(two.matrix(), multiplication_map(3, 1, 1, 2).matrix());
  EXPECT_EQ(two.after(two).matrix(), FpMatrix::identity(two.matrix().field(), 3));
  // [2] = [-1] on C_3, so it agrees with the inversion series.
  EXPECT_EQ(two.matrix(), inversion_matrix(3, 1));
}

TEST(Restrict, FunctorialityOnRandomPairs) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t p = trial % 2 == 0 ? 2 : 3;
    const auto gp = params(p);
    auto pick = [&] {
      std::vector<std::uint32_t> t;
      const int k = 1 + static_cast<int>(rng() % 2);
      for (int i = 0; i < k; ++i) t.push_back(1 + rng() % 2);
      if (p == 3 && t.size() == 2) t = {t[0]};
      return cyc(p, t);
    };
    auto a = pick();
    auto b = pick();
    auto c = pick();
    auto random_hom = [&](const std::shared_ptr<const AbelianPGroup>& s, const std::shared_ptr<const AbelianPGroup>& t) {
      Matrix m(t->rank(), std::vector<std::int64_t>(s->rank(), 0));
      for (std::size_t j = 0; j < t->rank(); ++j)
        for (std::size_t i = 0; i < s->rank(); ++i) {
          const auto sj = static_cast<std::int64_t>(t->basis_order(j));
          const auto ri = static_cast<std::int64_t>(s->basis_order(i));
          const std::int64_t step = sj > ri ? sj / ri : 1;
          m[j][i] = step * static_cast<std::int64_t>(rng() % static_cast<std::uint32_t>(sj / step));
        }
      return hom_from_matrix(s, t, m);
    };
    const auto alpha = random_hom(a, b);
    const auto beta = random_hom(b, c);
    const auto lhs = restrict(hom_compose(beta, alpha), gp);
    const auto rhs = restrict(alpha, gp).after(restrict(beta, gp));
    EXPECT_EQ(lhs.matrix(), rhs.matrix());
    EXPECT_TRUE(verify_algebra_map(lhs));
  }
}

TEST(Restrict, MonoEpiRanks) {
  const auto gp = params(2);
  auto c2 = cyc(2, {1});
  auto c4 = cyc(2, {2});
  auto v4 = cyc(2, {1, 1});
  auto c42 = cyc(2, {2, 1});
  // Epimorphisms give injective restrictions; monomorphisms give surjective ones.
  const auto epi = hom_from_matrix(c4, c2, {{1}});
  EXPECT_TRUE(epi.is_surjective());
  EXPECT_EQ(restrict(epi, gp).matrix().rank(), 2u);
  const auto mono = hom_from_matrix(c2, c42, {{2}, {0}});
  EXPECT_TRUE(mono.is_injective());
  EXPECT_EQ(restrict(mono, gp).matrix().rank(), 2u);
  // Neither: C4 -> V4 with image of order 2.
  const auto neither = hom_from_matrix(c4, v4, {{1}, {0}});
  const auto r = restrict(neither, gp);
  // It factors through A(C2): onto from A(V4), injective into A(C4).
  EXPECT_EQ(r.matrix().rank(), 2u);
}

TEST(Restrict, AutomorphismsFixSocle) {
  for (const auto& [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{3, 1}, {2, 2}, {3, 2}, {2, 3}, {5, 1}}) {
    const auto gp = params(p);
    auto c = cyc(p, {r});
    auto v = value_abelian({r}, gp);
    const Vec top = monomial(*v, {static_cast<std::uint32_t>(checked_power(p, r) - 1)});
    for (std::int64_t u = 1; u < static_cast<std::int64_t>(checked_power(p, r)); ++u) {
      if (u % p == 0) continue;
      EXPECT_EQ(restrict(hom_from_matrix(c, c, {{u}}), gp).apply(top), top) << "p=" << p << " r=" << r << " u=" << u;
    }
  }
}

TEST(Transfer, IndOneOnCyclicGroups) {
  for (const auto& [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    const auto gp = params(p, n);
    auto v = value_abelian({1}, gp);
    const auto q = static_cast<std::uint32_t>(checked_power(p, n));
    EXPECT_EQ(v->ind_one, monomial(*v, {q - 1}));
  }
}

TEST(Transfer, C2IntoC4) {
  const auto gp = params(2);
  auto c2 = cyc(2, {1});
  auto c4 = cyc(2, {2});
  auto v2 = value_abelian({1}, gp);
  auto v4 = value_abelian({2}, gp);
  const auto res = restrict(hom_from_matrix(c2, c4, {{2}}), gp);
  const auto ind = transfer(res, *v4, *v2);
  EXPECT_EQ(ind.apply(v2->algebra->one()), monomial(*v4, {2}));
  EXPECT_EQ(ind.apply(monomial(*v2, {1})), monomial(*v4, {3}));
  EXPECT_TRUE(frobenius_identity_exhaustive(res, ind));
}

TEST(Transfer, TransitivityOnCyclicChains) {
  for (std::uint32_t p : {2u, 3u}) {
    const auto gp = params(p);
    auto g1 = cyc(p, {});
    auto gp1 = cyc(p, {1});
    auto gp2 = cyc(p, {2});
    auto v0 = value_abelian({}, gp);
    auto v1 = value_abelian({1}, gp);
    auto v2 = value_abelian({2}, gp);
    const auto res21 = restrict(hom_from_matrix(gp1, gp2, {{p}}), gp);
    const auto res10 = restrict(hom_from_matrix(g1, gp1, Matrix(1)), gp);
    const auto res20 = restrict(hom_from_matrix(g1, gp2, Matrix(1)), gp);
    const auto ind21 = transfer(res21, *v2, *v1);
    const auto ind10 = transfer(res10, *v1, *v0);
    const auto ind20 = transfer(res20, *v2, *v0);
    EXPECT_EQ(ind21.after(ind10).matrix(), ind20.matrix());
    for (const auto& [r, i] : std::vector<std::pair<AlgebraMap, AlgebraMap>>{{res21, ind21}, {res10, ind10}, {res20, ind20}}) {
      EXPECT_TRUE(frobenius_identity_exhaustive(r, i));
    }
    // aug(ind^K_H(1)) = |K:H| mod p.
    EXPECT_EQ(v2->algebra->aug(ind21.apply(v1->algebra->one())), 0u);
    EXPECT_EQ(v2->algebra->aug(ind20.apply(v0->algebra->one())), 0u);
  }
}

TEST(StableElements, PGroupGivesEverything) {
  const auto st = stable_elements(named_group("C4"), params(2));
  EXPECT_EQ(st.lim_basis.size(), 4u);
  EXPECT_EQ(st.colim_dim, 4u);
  EXPECT_EQ(st.double_coset_reps.size(), 1u);
}

TEST(StableElements, SymmetricGroupOnThreePoints) {
  const auto gp = params(3);
  const auto st = stable_elements(named_group("S3"), gp);
  ASSERT_EQ(st.lim_basis.size(), 2u);
  EXPECT_EQ(st.colim_dim, 2u);
  // Oracle: fixed points of x |-> [-1](x) from the inversion series.
  const FpMatrix m = inversion_matrix(3, 1);
  const auto fixed = mat_kernel(m - FpMatrix::identity(m.field(), 3));
  EXPECT_TRUE(same_span(m.field(), 3, fixed, st.lim_basis));
  EXPECT_TRUE(same_span(m.field(), 3, st.lim_basis, std::vector<Vec>{{1, 0, 0}, {0, 0, 1}}));
}

TEST(StableElements, AlternatingGroupOnFourPoints) {
  const auto gp = params(2);
  GreenFunctor f(named_group("A4"), gp);
  const auto node = f.node(*f.group());
  const auto& st = node->stable;
  EXPECT_EQ(st.sylow->type(), (std::vector<std::uint32_t>{1, 1}));
  const auto action = normalizer_action(f);
  ASSERT_EQ(action.size(), 1u);
  // Oracle: count fixed points of the order-3 automorphism among all 16 elements.
  std::size_t fixed = 0;
  for (const auto& z : all_elements(2, 4)) fixed += action[0].apply(z) == z ? 1 : 0;
  std::size_t dim = 0;
  while ((std::size_t{1} << dim) < fixed) ++dim;
  EXPECT_EQ(std::size_t{1} << dim, fixed);
  EXPECT_EQ(st.lim_basis.size(), dim);
  EXPECT_EQ(st.colim_dim, dim);
  const auto inv = invariants(*node->sylow_value, action);
  EXPECT_EQ(inv->basis(), st.lim_basis);
}

TEST(Invariants, TrivialActionAndErrors) {
  auto v = value_abelian({1, 1}, params(2));
  EXPECT_EQ(invariants(*v, {})->dim(), 4u);
  FpMatrix zero(v->algebra->field(), 4, 4);
  EXPECT_THROW(invariants(*v, {AlgebraMap(v->algebra, v->algebra, zero, false, false)}), InputError);
}

TEST(Invariants, SymmetricGroupMatchesStableElements) {
  GreenFunctor f(named_group("S3"), params(3));
  const auto node = f.node(*f.group());
  const auto inv = invariants(*node->sylow_value, normalizer_action(f));
  EXPECT_EQ(inv->basis(), node->stable.lim_basis);
}

TEST(ValueGeneral, Examples) {
  const auto c2 = value_general(named_group("C2"), params(3));
  EXPECT_EQ(c2.algebra->dim(), 1u);
  EXPECT_EQ(c2.ind_one, (Vec{1}));
  const auto s3 = value_general(named_group("S3"), params(3));
  EXPECT_EQ(s3.algebra->dim(), 2u);
  EXPECT_EQ(socle_basis(*s3.algebra).size(), 1u);
  EXPECT_FALSE(vec_is_zero(s3.ind_one));
  const auto c9 = value_general(named_group("C9"), params(3));
  EXPECT_EQ(c9.algebra->dim(), 9u);
}

TEST(ValueGeneral, NonTriviality) {
  for (const char* name : {"C2", "C3", "C4", "V4", "C6", "S3", "A4"}) {
    for (std::uint32_t p : {2u, 3u}) {
      auto g = named_group(name);
      const auto v = value_general(g, params(p));
      EXPECT_EQ(v.algebra->dim() == 1, g->order() % p != 0) << name << " p=" << p;
      EXPECT_EQ(socle_basis(*v.algebra).size(), 1u);
    }
  }
}

TEST(ValueGeneral, NonAbelianSylowIsOutOfScope) {
  EXPECT_THROW(value_general(named_group("D4"), params(2)), ScopeError);
  EXPECT_THROW(value_general(named_group("S4"), params(2)), ScopeError);
}

TEST(GreenFunctor, RestrictionsIntoTheSylowSubgroup) {
  GreenFunctor f(named_group("S3"), params(3));
  const auto& g = *f.group();
  auto p = sylow(g, 3);
  const auto res = f.res(g, *p);
  EXPECT_EQ(res.matrix().rank(), 2u);
  EXPECT_TRUE(verify_algebra_map(res));
  const auto ind = f.ind(g, *p);
  EXPECT_TRUE(frobenius_identity_exhaustive(res, ind));
  // The transfer from the Sylow subgroup is onto.
  EXPECT_EQ(ind.matrix().rank(), 2u);
  // |S3 : C3| = 2 is prime to 3, so aug(ind(1)) is nonzero.
  EXPECT_NE(f.value(g).algebra->aug(ind.apply(f.value(*p).algebra->one())), 0u);
}

TEST(GreenFunctor, ConjugationIsIdentityOnNormalAbelianSubgroupCentre) {
  GreenFunctor f(named_group("C6"), params(3));
  auto p = sylow(*f.group(), 3);
  for (const auto& g : f.group()->elements()) {
    EXPECT_EQ(f.conj(g, *p).matrix(), FpMatrix::identity(f.value(*p).algebra->field(), 3));
  }
}

TEST(InflationInverse, CyclicQuotients) {
  for (const auto& [p, target] : std::vector<std::pair<std::uint32_t, const char*>>{{3, "C3"}, {2, "C2"}}) {
    auto c6 = named_group("C6");
    auto h = named_group(target);
    const PermHom beta(c6, h, std::vector<Perm>{h->generators()[0]});
    const auto gp = params(p);
    const auto inv = inflation_inverse(beta, gp);
    EXPECT_EQ(inv.matrix().rows(), inv.matrix().cols());
    EXPECT_EQ(inv.matrix().rank(), inv.matrix().rows());
    EXPECT_EQ(inv.matrix().rows(), p);
    const auto fg = build_node(c6, gp);
    const auto fh = build_node(h, gp);
    std::vector<Perm> images;
    for (const auto& e : c6->elements()) images.push_back(beta.apply(e));
    const auto pull = pullback_nodes(fh, fg, images, gp);
    EXPECT_EQ(inv.after(pull).matrix(), FpMatrix::identity(inv.matrix().field(), p));
    EXPECT_EQ(pull.after(inv).matrix(), FpMatrix::identity(inv.matrix().field(), p));
  }
}

TEST(InflationInverse, IdentityAndErrors) {
  auto c3 = named_group("C3");
  const PermHom id(c3, c3, c3->generators());
  EXPECT_EQ(inflation_inverse(id, params(3)).matrix(), FpMatrix::identity(PrimeField(3), 3));
  auto c6 = named_group("C6");
  auto c2 = named_group("C2");
  EXPECT_THROW(inflation_inverse(PermHom(c6, c2, std::vector<Perm>{c2->generators()[0]}), params(3)), InputError);
}
