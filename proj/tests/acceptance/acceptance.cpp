#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenkernel/audit.hpp"
#include "greenkernel/cli.hpp"
#include "greenkernel/error.hpp"
#include "greenkernel/frobform.hpp"
#include "greenkernel/green.hpp"
#include "greenkernel/hopftower.hpp"

using namespace greenkernel;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5) failures.push_back(what);
    }
  }
};

struct Criterion {
  const char* id;
  const char* title;
  const char* tolerance;
  std::function<Outcome()> run;
};

const std::vector<std::string> kBattery{"C2", "C3", "C4", "V4", "C6", "S3", "A4"};

std::map<Exponents, Residue> term_map(const FpPoly& f) {
  std::map<Exponents, Residue> out;
  for (const auto& [e, c] : f.graded_terms()) out[e] = c;
  return out;
}

// Levels with q^r <= 81.
std::vector<std::array<std::uint32_t, 3>> small_levels() {
  std::vector<std::array<std::uint32_t, 3>> out;
  for (std::uint32_t p = 2; p <= 81; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint32_t n = 1; checked_power(p, n) <= 81; ++n) {
      for (std::uint32_t r = 1; checked_power(p, n * r) <= 81; ++r) out.push_back({p, n, r});
    }
  }
  return out;
}

std::string level_name(std::uint32_t p, std::uint32_t n, std::uint32_t r) {
  return "(p,n,r)=(" + std::to_string(p) + "," + std::to_string(n) + "," + std::to_string(r) + ")";
}

Vec x_power(const BorelAlgebra& a, std::uint32_t k) {
  const std::uint32_t e[1] = {k};
  return a.basis_vector(a.index_of(e));
}

struct Case {
  std::string group;
  std::uint32_t p;
};

std::vector<Case> battery_cases() {
  std::vector<Case> out;
  for (std::uint32_t p : {2u, 3u}) {
    for (const auto& g : kBattery) out.push_back({g, p});
  }
  return out;
}

std::string case_name(const Case& c, const PermGroup* h = nullptr) {
  std::string s = c.group + " p=" + std::to_string(c.p);
  if (h) s += " H=" + h->description();
  return s;
}

Outcome coproduct_ground_truth() {
  Outcome o;
  for (auto [p, n] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}}) {
    const auto level = honda_level(p, n, 1);
    const PrimeField& f = level->algebra()->field();
    const std::uint32_t pn1 = static_cast<std::uint32_t>(checked_power(p, n - 1));
    std::map<Exponents, Residue> expected;
    expected[{1, 0}] = 1;
    expected[{0, 1}] = 1;
    for (std::uint32_t i = 1; i + 1 <= p; ++i) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), p, i);
      const Residue c = reduce_mod_p(-make_rational(binom, p), f);
      if (c != 0) expected[{i * pn1, (p - i) * pn1}] = c;
    }
    o.expect(term_map(level->hopf.coproduct[0]) == expected, "(p,n)=(" + std::to_string(p) + "," + std::to_string(n) + ")");
  }
  o.detail = "3 cases";
  return o;
}

Outcome hopf_axioms() {
  Outcome o;
  const auto levels = small_levels();
  for (const auto& [p, n, r] : levels) {
    const HopfReport h = hopf_check(honda_level(p, n, r)->hopf);
    o.expect(h.well_defined && h.coassociative && h.counital && h.antipode && h.cocommutative, level_name(p, n, r));
  }
  o.detail = std::to_string(levels.size()) + " levels with q^r <= 81";
  return o;
}

Outcome p_divisible() {
  Outcome o;
  for (auto [p, n] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}}) {
    const std::uint32_t r = 1, s = 1;
    const std::uint64_t qr = checked_power(p, n * r);
    const auto maps = tower_maps(p, n, r, s);
    const auto& big = *honda_level(p, n, r + s)->algebra();
    const auto& hr = *honda_level(p, n, r)->algebra();
    const auto& hs = *honda_level(p, n, s)->algebra();
    const std::string name = level_name(p, n, r) + " s=1";
    for (std::uint32_t k = 0; k < hs.dim(); ++k) {
      o.expect(maps.inj.apply(x_power(hs, k)) == x_power(big, static_cast<std::uint32_t>(k * qr)), name + " injection");
    }
    for (std::uint32_t k = 0; k < big.dim(); ++k) {
      const Vec expect = k < hr.dim() ? x_power(hr, k) : Vec(hr.dim(), 0);
      o.expect(maps.surj.apply(x_power(big, k)) == expect, name + " surjection");
    }
    const auto pr = multiplication_map(p, n, r, static_cast<std::int64_t>(checked_power(p, r)));
    o.expect(vec_is_zero(pr.apply(x_power(hr, 1))), name + " [p^r](x_r) != 0");
    const PdivReport rep = pdiv_check(p, n, r, s, kDefaultSizeBudget);
    o.expect(rep.kernel_is_ideal && rep.kernel_dim == big.dim() - hr.dim(), name + " kernel identity");
  }
  o.detail = "(2,1,1,1), (3,1,1,1), (2,2,1,1)";
  return o;
}

Outcome socle_and_integrals() {
  Outcome o;
  std::size_t levels = 0, values = 0;
  for (const auto& [p, n, r] : small_levels()) {
    const auto& a = *honda_level(p, n, r)->algebra();
    const std::vector<Vec> top{x_power(a, static_cast<std::uint32_t>(a.dim() - 1))};
    const auto soc = socle_basis(a);
    o.expect(soc.size() == 1 && same_span(a.field(), a.dim(), soc, top), level_name(p, n, r) + " socle");
    o.expect(same_span(a.field(), a.dim(), integrals(a), top), level_name(p, n, r) + " integrals");
    ++levels;
  }
  for (const auto& c : battery_cases()) {
    GreenFunctor f(named_group(c.group), make_green_params(c.p, 1));
    for (const auto& h : small_subgroups(*f.group())) {
      o.expect(socle_basis(*f.value(*h).algebra).size() == 1, case_name(c, h.get()));
      ++values;
    }
  }
  o.detail = std::to_string(levels) + " levels, " + std::to_string(values) + " values";
  return o;
}

std::vector<Vec> random_basis(const LocalAlgebra& a, std::mt19937& rng) {
  const std::uint32_t p = a.field().p();
  const std::size_t d = a.dim();
  std::vector<Vec> u{vec_scale(a.field(), 1 + rng() % (p - 1), socle_basis(a)[0])};
  while (u.size() < d) {
    Vec v(d);
    for (auto& x : v) x = rng() % p;
    auto trial = u;
    trial.push_back(v);
    if (span_basis(a.field(), d, trial).size() == trial.size()) u.push_back(v);
  }
  return u;
}

Outcome frobenius_toolkit() {
  Outcome o;
  std::vector<std::pair<std::string, AlgebraPtr>> algebras;
  for (const auto& c : battery_cases()) {
    algebras.emplace_back(case_name(c), value_general(named_group(c.group), make_green_params(c.p, 1)).algebra);
  }
  for (const auto& [p, profile] : std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>{
           {2, {8}}, {2, {4, 2}}, {3, {9}}, {3, {3, 3}}, {5, {25}}}) {
    algebras.emplace_back("profile p=" + std::to_string(p), make_algebra(p, profile));
  }
  std::mt19937 rng(4242);
  std::size_t cases = 0;
  for (const auto& [name, a] : algebras) {
    const FrobeniusForm lambda = canonical_form(a);
    o.expect(is_frobenius_form(a, lambda.covector).frobenius, name + " canonical form");
    if (a->dim() > 1) o.expect(!is_frobenius_form(a, unit_vector(a->dim(), 0)).frobenius, name + " augmentation");
    for (int trial = 0; trial < 20; ++trial) {
      const auto u = random_basis(*a, rng);
      Vec t(a->dim());
      for (auto& x : t) x = rng() % a->field().p();
      t[0] = 1 + rng() % (a->field().p() - 1);
      const FrobeniusForm mod = modify_form(lambda, u, t);
      for (std::size_t i = 0; i < a->dim(); ++i) o.expect(mod(u[i]) == t[i], name + " modify_form target");
      const Vec inv = unit_inverse(*a, form_unit(lambda, mod));
      for (std::size_t i = 0; i < a->dim(); ++i) {
        o.expect(mod(a->basis_vector(i)) == lambda(a->mul(a->basis_vector(i), inv)), name + " form_unit round trip");
      }
      ++cases;
    }
  }
  o.detail = std::to_string(algebras.size()) + " algebras, " + std::to_string(cases) + " randomized forms (seed 4242)";
  return o;
}

Outcome transfers() {
  Outcome o;
  for (auto [p, n] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}}) {
    const auto v = value_abelian({1}, make_green_params(p, n));
    o.expect(v->ind_one == x_power(*v->borel, static_cast<std::uint32_t>(checked_power(p, n) - 1)),
             "ind_one C_p p=" + std::to_string(p) + " n=" + std::to_string(n));
  }
  for (std::uint32_t p : {2u, 3u}) {
    GreenFunctor f(named_group("C" + std::to_string(p * p)), make_green_params(p, 1));
    const auto& g = *f.group();
    const auto cp = subgroup(g, {perm_pow(g.generators()[0], p)});
    const auto one = subgroup(g, {});
    o.expect(f.ind(g, *cp).after(f.ind(*cp, *one)).matrix() == f.ind(g, *one).matrix(),
             "transitivity p=" + std::to_string(p));
    for (const auto& [k, h] : {std::pair{cp, one}, {f.group(), cp}, {f.group(), one}}) {
      const Residue index = static_cast<Residue>((k->order() / h->order()) % p);
      o.expect(f.value(*k).algebra->aug(f.ind(*k, *h).apply(f.value(*h).algebra->one())) == index,
               "aug(ind(1)) on the chain p=" + std::to_string(p));
    }
  }
  std::size_t pairs = 0, p_prime = 0, p_prime_off = 0;
  for (const auto& c : battery_cases()) {
    GreenFunctor f(named_group(c.group), make_green_params(c.p, 1));
    const auto subs = small_subgroups(*f.group());
    for (const auto& k : subs) {
      for (const auto& h : subs) {
        if (!h->is_subgroup_of(*k)) continue;
        const AlgebraMap res = f.res(*k, *h);
        const AlgebraMap ind = f.ind(*k, *h);
        const LocalAlgebra& ak = *f.value(*k).algebra;
        const LocalAlgebra& ah = *f.value(*h).algebra;
        const std::string name = case_name(c, h.get()) + " K=" + k->description();
        for (std::size_t i = 0; i < ah.dim(); ++i) {
          for (std::size_t j = 0; j < ak.dim(); ++j) {
            const Vec x = ah.basis_vector(i);
            const Vec y = ak.basis_vector(j);
            o.expect(ind.apply(ah.mul(x, res.apply(y))) == ak.mul(ind.apply(x), y), name + " projection formula");
          }
        }
        const Residue index = static_cast<Residue>((k->order() / h->order()) % c.p);
        const Vec ind_one = ind.apply(ah.one());
        if (index == 0) {
          o.expect(ak.aug(ind_one) == 0, name + " aug(ind(1))");
        } else {
          // Canonical forms fix ind(1) only up to a unit here; the congruence itself is reported.
          o.expect(is_unit(ak, ind_one), name + " ind(1) is a unit");
          ++p_prime;
          if (ak.aug(ind_one) != index) ++p_prime_off;
        }
        ++pairs;
      }
    }
  }
  o.detail = std::to_string(pairs) + " transfers checked on all basis pairs; aug(ind(1)) = |K:H| exact on p-index pairs; " +
             std::to_string(p_prime_off) + " of " + std::to_string(p_prime) +
             " p'-index pairs have aug(ind(1)) != |K:H| (unit checked)";
  return o;
}

Outcome stable_elements_criterion() {
  Outcome o;
  std::ostringstream d;
  for (const auto& c : std::vector<Case>{{"S3", 3}, {"A4", 2}}) {
    const auto params = make_green_params(c.p, 1);
    const GroupPtr g = named_group(c.group);
    const StableResult st = stable_elements(g, params);
    GreenFunctor f(g, params);
    const auto sylow_value = f.value(*sylow(*g, c.p));
    const auto fixed = invariants(sylow_value, normalizer_action(f));
    const std::size_t lim = st.lim_basis.size();
    o.expect(lim == st.colim_dim && lim == fixed->dim(), case_name(c));
    d << c.group << ": lim " << lim << ", colim " << st.colim_dim << ", invariants " << fixed->dim() << "; ";
    if (c.group == "S3") o.expect(socle_basis(*value_general(g, params).algebra).size() == 1, "S3 socle");
  }
  o.detail = d.str().substr(0, d.str().size() - 2);
  return o;
}

Outcome non_triviality() {
  Outcome o;
  for (const auto& c : battery_cases()) {
    const GroupPtr g = named_group(c.group);
    const bool trivial = value_general(g, make_green_params(c.p, 1)).algebra->dim() == 1;
    o.expect(trivial == (g->order() % c.p != 0), case_name(c));
  }
  o.detail = "14 (group, p) pairs";
  return o;
}

struct HomCase {
  std::uint32_t p;
  std::vector<std::uint32_t> source, target;
  std::vector<std::vector<std::int64_t>> matrix;
};

// alpha(g_i) = sum_j m[j][i] h_j is well defined iff p^{r_i} m[j][i] = 0 mod p^{s_j}.
AbelianHom random_hom(std::uint32_t p, const std::vector<std::uint32_t>& src, const std::vector<std::uint32_t>& tgt,
                      std::mt19937& rng) {
  std::vector<std::vector<std::int64_t>> m(tgt.size(), std::vector<std::int64_t>(src.size()));
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      const std::uint32_t shift = tgt[j] > src[i] ? tgt[j] - src[i] : 0;
      m[j][i] = static_cast<std::int64_t>((rng() % checked_power(p, tgt[j])) * checked_power(p, shift));
    }
  }
  return hom_from_matrix(cyclic_product(p, src), cyclic_product(p, tgt), m);
}

Outcome mono_epi() {
  Outcome o;
  const std::vector<HomCase> epis{
      {2, {2}, {1}, {{1}}},          {2, {3}, {2}, {{1}}},          {2, {3}, {1}, {{1}}},
      {2, {1, 1}, {1}, {{1, 0}}},    {2, {2, 1}, {2}, {{1, 0}}},    {2, {2, 1}, {1, 1}, {{1, 0}, {0, 1}}},
      {2, {2, 1}, {1}, {{0, 1}}},    {3, {2}, {1}, {{1}}},          {3, {1, 1}, {1}, {{1, 1}}},
      {3, {2}, {2}, {{2}}}};
  const std::vector<HomCase> monos{
      {2, {1}, {2}, {{2}}},          {2, {1}, {3}, {{4}}},          {2, {2}, {3}, {{2}}},
      {2, {1}, {1, 1}, {{1}, {1}}},  {2, {1}, {2, 1}, {{2}, {1}}},  {2, {1, 1}, {2, 1}, {{2, 0}, {0, 1}}},
      {2, {2}, {2, 1}, {{1}, {1}}},  {3, {1}, {2}, {{3}}},          {3, {1}, {1, 1}, {{1}, {2}}},
      {3, {1}, {2}, {{6}}}};
  for (const auto& [cases, epi] : {std::pair{&epis, true}, {&monos, false}}) {
    for (const auto& hc : *cases) {
      const auto alpha = hom_from_matrix(cyclic_product(hc.p, hc.source), cyclic_product(hc.p, hc.target), hc.matrix);
      const auto m = restrict(alpha, make_green_params(hc.p, 1)).matrix();
      const std::string name = std::string(epi ? "epi " : "mono ") + alpha.source->group()->description() + " -> " +
                               alpha.target->group()->description();
      o.expect(epi ? alpha.is_surjective() : alpha.is_injective(), name + " precondition");
      o.expect(m.rank() == (epi ? m.cols() : m.rows()), name + " rank");
    }
  }
  std::mt19937 rng(909);
  const std::vector<std::vector<std::uint32_t>> types2{{1}, {2}, {3}, {1, 1}, {2, 1}};
  const std::vector<std::vector<std::uint32_t>> types3{{1}, {2}, {1, 1}};
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t p = trial % 2 == 0 ? 2 : 3;
    const auto& types = p == 2 ? types2 : types3;
    const auto& a = types[rng() % types.size()];
    const auto& b = types[rng() % types.size()];
    const auto& c = types[rng() % types.size()];
    const auto params = make_green_params(p, 1);
    const AbelianHom alpha = random_hom(p, a, b, rng);
    const AbelianHom beta = random_hom(p, b, c, rng);
    const auto composite = restrict(hom_compose(beta, alpha), params);
    const auto separate = restrict(alpha, params).after(restrict(beta, params));
    o.expect(composite.matrix() == separate.matrix(), "functoriality trial " + std::to_string(trial));
  }
  o.detail = "10 epimorphisms, 10 monomorphisms, 20 composable pairs (seed 909)";
  return o;
}

Outcome automorphisms_fix_socle() {
  Outcome o;
  for (auto [p, r] : {std::pair{3u, 1u}, {2u, 2u}, {3u, 2u}, {2u, 3u}}) {
    const std::int64_t order = static_cast<std::int64_t>(checked_power(p, r));
    // (Z/p^r)^x is cyclic on 2 for 3 and 9, on 3 for 4, and on {3, 5} for 8.
    std::vector<std::int64_t> gens = order == 8 ? std::vector<std::int64_t>{3, 5}
                                     : order == 4 ? std::vector<std::int64_t>{3}
                                                  : std::vector<std::int64_t>{2};
    const auto c = cyclic_product(p, {r});
    const auto v = value_abelian({r}, make_green_params(p, 1));
    const Vec top = v->algebra->basis_vector(v->algebra->dim() - 1);
    for (const auto u : gens) {
      const auto m = restrict(hom_from_matrix(c, c, {{u}}), make_green_params(p, 1));
      o.expect(m.apply(top) == top, "C" + std::to_string(order) + " u=" + std::to_string(u));
    }
  }
  o.detail = "C3, C4, C9, C8";
  return o;
}

Outcome inflation_inverse_criterion() {
  Outcome o;
  for (auto [p, kernel_order] : {std::pair{3u, 2u}, {2u, 3u}}) {
    const auto params = make_green_params(p, 1);
    const GroupPtr g = named_group("C6");
    const Perm x = g->generators()[0];
    const auto k = subgroup(*g, {perm_pow(x, 6 / kernel_order)});
    const PermHom beta = quotient_map(g, *k);
    const AlgebraMap inv = inflation_inverse(beta, params);
    const auto ng = build_node(g, params);
    const auto nh = build_node(beta.target(), params);
    std::vector<Perm> images;
    for (const auto& e : g->elements()) images.push_back(beta.apply(e));
    const AlgebraMap pull = pullback_nodes(nh, ng, images, params);
    const std::string name = "C6 -> C" + std::to_string(6 / kernel_order) + " p=" + std::to_string(p);
    o.expect(inv.after(pull).matrix() == FpMatrix::identity(inv.target()->field(), inv.target()->dim()), name + " left");
    o.expect(pull.after(inv).matrix() == FpMatrix::identity(pull.target()->field(), pull.target()->dim()), name + " right");
  }
  o.detail = "C6 -> C3 at p=3, C6 -> C2 at p=2";
  return o;
}

Outcome audit_integrity() {
  Outcome o;
  std::ostringstream d;
  for (std::uint32_t p : {2u, 3u}) {
    std::ostringstream out, err;
    const int code = dispatch({"audit", "assumptions", "--p", std::to_string(p), "--no-timing", "--format", "json"}, out, err);
    o.expect(code == kExitOk, "audit assumptions p=" + std::to_string(p) + " exit " + std::to_string(code));
    const auto j = nlohmann::json::parse(out.str());
    o.expect(validate_schema(j, audit_report_schema()).empty(), "assumptions schema p=" + std::to_string(p));
  }
  std::ostringstream out, err;
  const int code = dispatch({"audit", "mackey", "--group", "S3", "--p", "3", "--no-timing", "--format", "json"}, out, err);
  o.expect(code == kExitOk || code == kExitCheckFailed, "audit mackey exit " + std::to_string(code));
  const auto j = nlohmann::json::parse(out.str());
  o.expect(validate_schema(j, audit_report_schema()).empty(), "mackey schema");
  std::size_t mf5 = 0;
  for (const auto& row : j["checks"]) {
    const std::string status = row["status"];
    o.expect(status != "fail" || row.contains("witness"), "silent failure " + row["name"].get<std::string>());
    o.expect(status != "up-to-unit" || row.contains("scalar"), "unit without scalar " + row["name"].get<std::string>());
    const std::string instance = row["instance"];
    if (row["name"] == "mackey.double_coset" && instance.find("H=order 6") != std::string::npos &&
        instance.find("K=order 3") != std::string::npos && instance.find("L=order 3") != std::string::npos) {
      ++mf5;
      d << "double coset formula (S3, C3, p=3): " << status;
      if (row.contains("scalar")) d << " scalar " << row["scalar"];
    }
  }
  o.expect(mf5 == 1, "double coset row for (S3, C3) reported " + std::to_string(mf5) + " times");
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC01", "coproduct of H_1 matches the binomial formula", "exact", coproduct_ground_truth},
      {"AC02", "Hopf axioms on every level", "exact", hopf_axioms},
      {"AC03", "p-divisible tower maps and kernels", "exact", p_divisible},
      {"AC04", "socles, integrals and one-dimensional socles of values", "exact", socle_and_integrals},
      {"AC05", "Frobenius forms, modified forms and form units", "exact", frobenius_toolkit},
      {"AC06", "transfers: ind(1), transitivity, projection formula, aug(ind(1))", "exact", transfers},
      {"AC07", "stable elements: lim = colim = invariants", "exact", stable_elements_criterion},
      {"AC08", "dim A(G) = 1 iff p does not divide |G|", "exact", non_triviality},
      {"AC09", "restriction along epis/monos and functoriality", "exact", mono_epi},
      {"AC10", "automorphisms of C_{p^r} fix the socle", "exact", automorphisms_fix_socle},
      {"AC11", "inflation along p'-kernel quotients is invertible", "exact", inflation_inverse_criterion},
      {"AC12", "audit exit codes, schema validity and the double coset row", "exact", audit_integrity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %s %s [tolerance: %s] %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, c.tolerance,
                o.detail.c_str());
    for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
