#include "greenkernel/audit.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <thread>

#include "greenkernel/error.hpp"
#include "greenkernel/hopftower.hpp"

namespace greenkernel {

namespace {

struct Outcome {
  AuditStatus status = AuditStatus::exact;
  std::optional<std::uint32_t> scalar;
  std::optional<std::string> witness;
};

Outcome pass() { return {}; }
Outcome fail(std::string witness) { return {AuditStatus::fail, std::nullopt, std::move(witness)}; }
Outcome check(bool ok, const std::string& witness) { return ok ? pass() : fail(witness); }

/// Keeps the first failure, otherwise the weakest status.
Outcome combine(std::initializer_list<Outcome> parts) {
  Outcome out;
  for (const auto& o : parts) {
    if (o.status == AuditStatus::fail) return o;
    if (o.status == AuditStatus::up_to_unit && out.status == AuditStatus::exact) out = o;
  }
  return out;
}

struct Job {
  std::string name;
  std::string anchor;
  std::string instance;
  std::function<Outcome()> run;
};

std::string vec_string(const Vec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += " ";
    out += std::to_string(v[i]);
  }
  return out + ")";
}

std::string matrix_witness(const FpMatrix& lhs, const FpMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    return "shapes differ: lhs " + std::to_string(lhs.rows()) + "x" + std::to_string(lhs.cols()) + ", rhs " +
           std::to_string(rhs.rows()) + "x" + std::to_string(rhs.cols());
  }
  for (std::size_t c = 0; c < lhs.cols(); ++c) {
    if (lhs.column(c) != rhs.column(c)) {
      return "basis vector " + std::to_string(c) + ": lhs " + vec_string(lhs.column(c)) + ", rhs " +
             vec_string(rhs.column(c));
    }
  }
  return "matrices agree";
}

/// Exact equality, or lhs = c * rhs for a nonzero scalar c when `allow_unit`.
Outcome compare(const FpMatrix& lhs, const FpMatrix& rhs, bool allow_unit) {
  if (lhs == rhs) return pass();
  if (allow_unit && lhs.rows() == rhs.rows() && lhs.cols() == rhs.cols()) {
    const PrimeField& f = rhs.field();
    for (std::size_t r = 0; r < rhs.rows(); ++r) {
      for (std::size_t c = 0; c < rhs.cols(); ++c) {
        if (rhs(r, c) == 0) continue;
        const Residue s = f.mul(lhs(r, c), f.inv(rhs(r, c)));
        if (s != 0 && lhs == rhs.scaled(s)) return Outcome{AuditStatus::up_to_unit, s, std::nullopt};
        return fail(matrix_witness(lhs, rhs));
      }
    }
  }
  return fail(matrix_witness(lhs, rhs));
}

Outcome compare_vectors(const PrimeField& f, const Vec& lhs, const Vec& rhs, bool allow_unit) {
  FpMatrix a(f, lhs.size(), 1);
  FpMatrix b(f, rhs.size(), 1);
  a.set_column(0, lhs);
  b.set_column(0, rhs);
  return compare(a, b, allow_unit);
}

std::string name_of(const PermGroup& h) { return h.description(); }

std::vector<AuditCheck> run_jobs(std::vector<Job>& jobs, const AuditOptions& options) {
  std::vector<AuditCheck> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      Outcome o;
      try {
        o = jobs[i].run();
      } catch (const InvariantError& e) {
        o = fail(std::string("internal consistency: ") + e.what());
      } catch (...) {
        errors[i] = std::current_exception();
        continue;
      }
      const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
      rows[i] = AuditCheck{jobs[i].name, jobs[i].anchor, jobs[i].instance, o.status, o.scalar, o.witness,
                           options.timing ? elapsed.count() : 0.0};
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const AuditCheck& a, const AuditCheck& b) {
    return std::tie(a.name, a.instance) < std::tie(b.name, b.instance);
  });
  return rows;
}

using Matrix = std::vector<std::vector<std::int64_t>>;

/// Every homomorphism between two abelian p-groups, in lexicographic matrix order.
std::vector<AbelianHom> all_homs(const std::shared_ptr<const AbelianPGroup>& s,
                                 const std::shared_ptr<const AbelianPGroup>& t, std::size_t budget) {
  struct Slot {
    std::size_t j, i;
    std::int64_t step, bound;
  };
  std::vector<Slot> slots;
  std::size_t count = 1;
  for (std::size_t j = 0; j < t->rank(); ++j) {
    for (std::size_t i = 0; i < s->rank(); ++i) {
      const auto tj = static_cast<std::int64_t>(t->basis_order(j));
      const auto si = static_cast<std::int64_t>(s->basis_order(i));
      const std::int64_t step = tj > si ? tj / si : 1;
      slots.push_back({j, i, step, tj});
      count *= static_cast<std::size_t>(tj / step);
      if (count > budget) throw BudgetError("too many homomorphisms to enumerate", count);
    }
  }
  std::vector<AbelianHom> out;
  Matrix m(t->rank(), std::vector<std::int64_t>(s->rank(), 0));
  while (true) {
    out.push_back(hom_from_matrix(s, t, m));
    std::size_t k = 0;
    for (; k < slots.size(); ++k) {
      auto& e = m[slots[k].j][slots[k].i];
      e += slots[k].step;
      if (e < slots[k].bound) break;
      e = 0;
    }
    if (k == slots.size()) break;
  }
  return out;
}

std::string matrix_string(const Matrix& m) {
  std::string out = "[";
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (j > 0) out += "; ";
    for (std::size_t i = 0; i < m[j].size(); ++i) {
      if (i > 0) out += " ";
      out += std::to_string(m[j][i]);
    }
  }
  return out + "]";
}

std::string type_string(std::uint32_t p, const std::vector<std::uint32_t>& type) {
  if (type.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (i > 0) out += " x ";
    out += "C" + std::to_string(checked_power(p, type[i]));
  }
  return out;
}

bool in_socle(const LocalAlgebra& a, const Vec& v) {
  return in_span(a.field(), a.dim(), socle_basis(a), v);
}

void add_mackey_jobs(std::vector<Job>& jobs, const std::shared_ptr<const GreenFunctor>& f,
                     const std::vector<GroupPtr>& family) {
  const PermGroup& g = *f->group();
  const PrimeField field(f->params().p);
  auto identity = [f, field](const PermGroup& h) { return FpMatrix::identity(field, f->value(h).algebra->dim()); };

  for (const auto& h : family) {
    jobs.push_back({"mackey.identity", "res^H_H = ind^H_H = c_h = id", name_of(*h), [=] {
                      const FpMatrix id = identity(*h);
                      Outcome o = combine({compare(f->res(*h, *h).matrix(), id, false),
                                           compare(f->ind(*h, *h).matrix(), id, false)});
                      for (const auto& x : h->generators()) {
                        if (o.status == AuditStatus::fail) break;
                        o = combine({o, compare(f->conj(x, *h).matrix(), id, false)});
                      }
                      return o;
                    }});
    for (const auto& x : g.generators()) {
      for (const auto& y : g.generators()) {
        jobs.push_back({"mackey.conj_composition", "c_{g1} c_{g2} = c_{g1 g2}",
                        name_of(*h) + "; g1=" + cycle_string(x) + ", g2=" + cycle_string(y), [=] {
                          auto mid = conjugate_subgroup(y, *h);
                          const FpMatrix lhs = f->conj(x, *mid).after(f->conj(y, *h)).matrix();
                          return compare(lhs, f->conj(perm_mul(x, y), *h).matrix(), false);
                        }});
      }
    }
  }

  for (const auto& hh : family) {
    for (const auto& kk : family) {
      if (kk->same_elements(*hh) || !kk->is_subgroup_of(*hh)) continue;
      const std::string pair = "K=" + name_of(*kk) + " <= H=" + name_of(*hh);
      jobs.push_back({"green.algebra_maps", "res^H_K and c_g are algebra maps", pair, [=] {
                        Outcome o = check(verify_algebra_map(f->res(*hh, *kk)), "res^H_K is not multiplicative");
                        for (const auto& x : f->group()->generators()) {
                          if (o.status == AuditStatus::fail) break;
                          o = check(verify_algebra_map(f->conj(x, *kk)), "c_g is not multiplicative for g=" + cycle_string(x));
                        }
                        return o;
                      }});
      jobs.push_back({"green.frobenius", "ind^H_K(x res^H_K(y)) = ind^H_K(x) y", pair, [=] {
                        return check(frobenius_identity_exhaustive(f->res(*hh, *kk), f->ind(*hh, *kk)),
                                     "module identity fails on a basis pair");
                      }});
      for (const auto& x : g.generators()) {
        const std::string inst = pair + "; g=" + cycle_string(x);
        jobs.push_back({"mackey.conj_res", "res c_g = c_g res", inst, [=] {
                          auto gh = conjugate_subgroup(x, *hh);
                          auto gk = conjugate_subgroup(x, *kk);
                          return compare(f->res(*gh, *gk).after(f->conj(x, *hh)).matrix(),
                                         f->conj(x, *kk).after(f->res(*hh, *kk)).matrix(), false);
                        }});
        jobs.push_back({"mackey.conj_ind", "ind c_g = c_g ind", inst, [=] {
                          auto gh = conjugate_subgroup(x, *hh);
                          auto gk = conjugate_subgroup(x, *kk);
                          return compare(f->ind(*gh, *gk).after(f->conj(x, *kk)).matrix(),
                                         f->conj(x, *hh).after(f->ind(*hh, *kk)).matrix(), true);
                        }});
      }
      for (const auto& ll : family) {
        if (ll->same_elements(*kk) || !ll->is_subgroup_of(*kk)) continue;
        const std::string chain = "L=" + name_of(*ll) + " <= " + pair;
        jobs.push_back({"mackey.res_transitivity", "res^K_L res^H_K = res^H_L", chain, [=] {
                          return compare(f->res(*kk, *ll).after(f->res(*hh, *kk)).matrix(),
                                         f->res(*hh, *ll).matrix(), false);
                        }});
        jobs.push_back({"mackey.ind_transitivity", "ind^H_K ind^K_L = ind^H_L", chain, [=] {
                          return compare(f->ind(*hh, *kk).after(f->ind(*kk, *ll)).matrix(),
                                         f->ind(*hh, *ll).matrix(), true);
                        }});
      }
    }
  }

  for (const auto& hh : family) {
    for (const auto& kk : family) {
      if (!kk->is_subgroup_of(*hh)) continue;
      for (const auto& ll : family) {
        if (!ll->is_subgroup_of(*hh)) continue;
        const auto reps = double_cosets(*hh, *ll, *kk);
        const std::string inst = "H=" + name_of(*hh) + "; K=" + name_of(*kk) + "; L=" + name_of(*ll) + "; " +
                                 std::to_string(reps.size()) + " double cosets";
        jobs.push_back({"mackey.double_coset", "res^H_L ind^H_K = sum_g ind^L c_g res_K over L\\H/K", inst, [=] {
                          const FpMatrix lhs = f->res(*hh, *ll).after(f->ind(*hh, *kk)).matrix();
                          FpMatrix rhs(field, lhs.rows(), lhs.cols());
                          for (const auto& x : reps) {
                            // ind^L_{L n xKx^-1} c_x res^K_{x^-1Lx n K}
                            auto inner = intersect(*conjugate_subgroup(perm_inverse(x), *ll), *kk);
                            auto outer = intersect(*ll, *conjugate_subgroup(x, *kk));
                            const AlgebraMap term =
                                f->ind(*ll, *outer).after(f->conj(x, *inner).after(f->res(*kk, *inner)));
                            rhs = rhs + term.matrix();
                          }
                          return compare(lhs, rhs, true);
                        }});
      }
    }
  }
}

/// Rows for one battery group.
void add_group_jobs(std::vector<Job>& jobs, const std::string& label, GroupPtr g, const GreenParams& params) {
  const std::uint32_t p = params.p;
  auto f = std::make_shared<const GreenFunctor>(g, params);
  const auto node = f->node(*g);
  const auto trivial = group_from_generators(g->degree(), {});
  const std::string inst = "G=" + label;

  jobs.push_back({"assumption.trivial_value", "A(1) = k", inst, [=] {
                    const GreenValue& v = f->value(*trivial);
                    return check(v.algebra->dim() == 1, "dim A(1) = " + std::to_string(v.algebra->dim()));
                  }});
  jobs.push_back({"assumption.ind_one_nonzero", "ind^G_1(1) != 0", inst, [=] {
                    return check(!vec_is_zero(f->value(*g).ind_one), "ind^G_1(1) = 0");
                  }});
  jobs.push_back({"ind_one.socle", "0 != ind^G_1(1) in soc A(G)", inst, [=] {
                    const GreenValue& v = f->value(*g);
                    const Vec one = f->ind(*g, *trivial).apply(f->value(*trivial).algebra->one());
                    return combine({check(one == v.ind_one, "transfer of 1 differs from the stored ind^G_1(1)"),
                                    check(!vec_is_zero(one), "ind^G_1(1) = 0"),
                                    check(in_socle(*v.algebra, one), "ind^G_1(1) = " + vec_string(one) +
                                                                         " is outside the socle")});
                  }});
  jobs.push_back({"non_triviality", "dim A(G) = 1 iff p does not divide |G|", inst, [=] {
                    const std::size_t d = f->value(*g).algebra->dim();
                    const bool trivial_value = d == 1;
                    const bool coprime = g->order() % p != 0;
                    return check(trivial_value == coprime, "|G| = " + std::to_string(g->order()) +
                                                               ", dim A(G) = " + std::to_string(d));
                  }});
  if (g->order() % p != 0) {
    jobs.push_back({"ind_one.unit", "p does not divide |G| => ind^G_1(1) is a unit", inst, [=] {
                      const GreenValue& v = f->value(*g);
                      return check(v.algebra->aug(v.ind_one) != 0, "aug(ind^G_1(1)) = 0");
                    }});
  }
  jobs.push_back({"ind_one.sylow", "res^G_P ind^G_1(1) = |G:P| ind^P_1(1)", inst, [=] {
                    const PermGroup& syl = *node->sylow;
                    const GreenValue& vp = f->value(syl);
                    const Vec lhs = f->res(*g, syl).apply(f->value(*g).ind_one);
                    const PrimeField& field = vp.algebra->field();
                    const auto index = static_cast<Residue>((g->order() / syl.order()) % p);
                    return compare_vectors(field, lhs, vec_scale(field, index, vp.ind_one), true);
                  }});

  for (const auto& h : small_subgroups(*g)) {
    if (h->same_elements(*g)) continue;
    const std::size_t index = g->order() / h->order();
    const std::string pair = inst + "; H=" + name_of(*h);
    if (index % p != 0) {
      jobs.push_back({"res_p_prime", "p does not divide |G:H| => ind^G_H(1) unit, ind res = multiplication by it",
                      pair, [=] {
                        const AlgebraMap res = f->res(*g, *h);
                        const AlgebraMap ind = f->ind(*g, *h);
                        const LocalAlgebra& a = *f->value(*g).algebra;
                        const Vec u = ind.apply(f->value(*h).algebra->one());
                        return combine({check(a.aug(u) != 0, "ind^G_H(1) = " + vec_string(u) + " is not a unit"),
                                        compare(ind.after(res).matrix(), a.mul_matrix(u), false)});
                      }});
    } else {
      jobs.push_back({"ind_p_index", "p divides |G:H| => ind^G_H lands in m(G)", pair, [=] {
                        const AlgebraMap ind = f->ind(*g, *h);
                        for (std::size_t c = 0; c < ind.matrix().cols(); ++c) {
                          if (ind.matrix()(0, c) != 0) {
                            return fail("aug(ind(basis vector " + std::to_string(c) + ")) = " +
                                        std::to_string(ind.matrix()(0, c)));
                          }
                        }
                        return pass();
                      }});
    }
  }

  // Normal subgroups K with A(K) = k give isomorphisms A(G/K) -> A(G).
  for (const auto& k : small_subgroups(*g)) {
    if (k->order() == 1 || k->order() % p == 0 || !is_normal(*k, *g)) continue;
    jobs.push_back({"assumption.p_prime_quotient", "A(K) = k, K normal => A(G/K) -> A(G) is an isomorphism",
                    inst + "; K=" + name_of(*k), [=] {
                      const PermHom pi = quotient_map(g, *k);
                      const AlgebraMap inv = inflation_inverse(pi, params);
                      const std::size_t d = inv.matrix().rows();
                      return check(d == inv.matrix().cols() && inv.matrix().rank() == d, "not invertible");
                    }});
  }
}

/// Rows for abelian p-group types: automorphisms, maps to cyclic groups, mono/epi.
void add_abelian_jobs(std::vector<Job>& jobs, const std::vector<std::vector<std::uint32_t>>& types,
                      const GreenParams& params) {
  const std::uint32_t p = params.p;
  constexpr std::size_t kHomBudget = 4096;
  for (const auto& t : types) {
    const std::string label = type_string(p, t);
    if (!t.empty()) {
      jobs.push_back({"auto_soc", "alpha^* ind^G_1(1) = ind^G_1(1) for automorphisms alpha", "G=" + label, [=] {
                        auto a = cyclic_product(p, t);
                        const auto v = value_abelian(t, params);
                        for (const auto& alpha : all_homs(a, a, kHomBudget)) {
                          if (!alpha.is_injective()) continue;
                          const Vec img = restrict(alpha, params).apply(v->ind_one);
                          if (img != v->ind_one) {
                            return fail("alpha = " + matrix_string(alpha.matrix) + " sends ind(1) to " + vec_string(img));
                          }
                        }
                        return pass();
                      }});
      const std::uint32_t top = *std::max_element(t.begin(), t.end());
      for (std::uint32_t s = 1; s <= top; ++s) {
        jobs.push_back({"g_to_cp", "G ->> C_{p^s} gives a monomorphism A(C_{p^s}) -> A(G)",
                        "G=" + label + "; C" + std::to_string(checked_power(p, s)), [=] {
                          auto a = cyclic_product(p, t);
                          auto c = cyclic_product(p, {s});
                          const std::size_t d = value_abelian({s}, params)->algebra->dim();
                          for (const auto& alpha : all_homs(a, c, kHomBudget)) {
                            if (!alpha.is_surjective()) continue;
                            if (restrict(alpha, params).matrix().rank() != d) {
                              return fail("alpha = " + matrix_string(alpha.matrix) + " gives a non-injective map");
                            }
                          }
                          return pass();
                        }});
      }
    }
    for (const auto& u : types) {
      jobs.push_back({"mono_epi", "alpha epi <=> alpha^* mono; alpha mono <=> alpha^* epi",
                      type_string(p, t) + " -> " + type_string(p, u), [=] {
                        auto a = cyclic_product(p, t);
                        auto b = cyclic_product(p, u);
                        const std::size_t da = value_abelian(t, params)->algebra->dim();
                        const std::size_t db = value_abelian(u, params)->algebra->dim();
                        for (const auto& alpha : all_homs(a, b, kHomBudget)) {
                          const std::size_t rank = restrict(alpha, params).matrix().rank();
                          if (alpha.is_surjective() != (rank == db)) {
                            return fail("alpha = " + matrix_string(alpha.matrix) + ": epi " +
                                        std::to_string(alpha.is_surjective()) + ", rank " + std::to_string(rank));
                          }
                          if (alpha.is_injective() != (rank == da)) {
                            return fail("alpha = " + matrix_string(alpha.matrix) + ": mono " +
                                        std::to_string(alpha.is_injective()) + ", rank " + std::to_string(rank));
                          }
                        }
                        return pass();
                      }});
    }
  }
}

}  // namespace

std::string status_name(AuditStatus s) {
  switch (s) {
    case AuditStatus::exact:
      return "exact";
    case AuditStatus::up_to_unit:
      return "up-to-unit";
    case AuditStatus::fail:
      return "fail";
  }
  return "fail";
}

std::size_t AuditReport::count(AuditStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [&](const AuditCheck& c) { return c.status == s; }));
}

std::vector<std::string> default_battery() { return {"C2", "C3", "V4", "C4", "C6", "S3", "A4"}; }

std::vector<GroupPtr> sylow_family(const GroupPtr& g, std::uint32_t p) {
  std::vector<GroupPtr> out{group_from_generators(g->degree(), {})};
  auto syl = sylow(*g, p);
  if (syl->order() > 1) out.push_back(syl);
  if (!syl->same_elements(*g)) out.push_back(g);
  return out;
}

AuditReport audit_mackey(GroupPtr g, const std::string& label, const GreenParams& params,
                         std::vector<GroupPtr> family, const AuditOptions& options) {
  if (family.empty()) family = small_subgroups(*g);
  if (std::none_of(family.begin(), family.end(), [&](const GroupPtr& h) { return h->same_elements(*g); })) {
    family.push_back(g);
  }
  for (const auto& h : family) {
    if (!h->is_subgroup_of(*g)) throw InputError("family member is not a subgroup: " + h->description());
  }
  auto f = std::make_shared<const GreenFunctor>(g, params);
  for (const auto& h : family) f->node(*h);
  std::vector<Job> jobs;
  add_mackey_jobs(jobs, f, family);
  AuditReport report;
  report.p = params.p;
  report.n = params.n;
  report.battery = {label};
  report.checks = run_jobs(jobs, options);
  return report;
}

AuditReport audit_assumptions(const std::vector<std::string>& battery, const GreenParams& params,
                              const AuditOptions& options) {
  std::vector<Job> jobs;
  std::vector<std::vector<std::uint32_t>> types{{}};
  for (const auto& name : battery) {
    auto g = named_group(name);
    add_group_jobs(jobs, name, g, params);
    auto syl = sylow(*g, params.p);
    if (syl->is_abelian()) {
      auto type = abelian_decompose(syl, params.p).type();
      if (std::find(types.begin(), types.end(), type) == types.end()) types.push_back(type);
    }
  }
  std::sort(types.begin(), types.end());
  add_abelian_jobs(jobs, types, params);
  const std::uint64_t q = checked_power(params.p, params.n);
  if (q * q <= params.budget) {
    jobs.push_back({"assumption.pdiv", "the Honda tower is a p-divisible group", "r=1, s=1", [=] {
                      const PdivReport rep = pdiv_check(params.p, params.n, 1, 1, params.budget);
                      std::string bad;
                      if (!rep.kernel_is_ideal) bad = "kernel differs from the ideal of [p](x)";
                      if (!rep.p_power_vanishes) bad = "[p](x_1) != 0";
                      for (const auto& [name, ok] : rep.squares) {
                        if (!ok && bad.empty()) bad = "square " + name + " does not commute";
                      }
                      if (bad.empty() && !rep.all()) bad = "tower maps are not Hopf maps of the right rank";
                      return check(bad.empty(), bad);
                    }});
  }
  AuditReport report;
  report.p = params.p;
  report.n = params.n;
  report.battery = battery;
  report.checks = run_jobs(jobs, options);
  return report;
}

nlohmann::ordered_json to_json(const AuditReport& report) {
  nlohmann::ordered_json out;
  out["meta"] = {{"p", report.p}, {"n", report.n}, {"battery", report.battery}, {"version", report.version}};
  out["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json row = {
        {"name", c.name}, {"anchor", c.anchor}, {"instance", c.instance}, {"status", status_name(c.status)}};
    if (c.scalar) row["scalar"] = *c.scalar;
    if (c.witness) row["witness"] = *c.witness;
    row["ms"] = c.ms;
    out["checks"].push_back(std::move(row));
  }
  return out;
}

namespace {

bool has_type(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

void validate_at(const nlohmann::json& v, const nlohmann::json& s, const std::string& path,
                 std::vector<std::string>& errors) {
  if (s.contains("type") && !has_type(v, s["type"].get<std::string>())) {
    errors.push_back(path + ": expected " + s["type"].get<std::string>());
    return;
  }
  if (s.contains("const") && v != s["const"]) errors.push_back(path + ": must equal " + s["const"].dump());
  if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end()) {
    errors.push_back(path + ": not one of " + s["enum"].dump());
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
    errors.push_back(path + ": below minimum " + s["minimum"].dump());
  }
  if (s.contains("minLength") && v.is_string() && v.get<std::string>().size() < s["minLength"].get<std::size_t>()) {
    errors.push_back(path + ": shorter than " + s["minLength"].dump());
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto& key : s["required"]) {
        if (!v.contains(key.get<std::string>())) errors.push_back(path + ": missing " + key.get<std::string>());
      }
    }
    const bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
    for (const auto& [key, value] : v.items()) {
      if (s.contains("properties") && s["properties"].contains(key)) {
        validate_at(value, s["properties"][key], path + "." + key, errors);
      } else if (closed) {
        errors.push_back(path + ": unexpected property " + key);
      }
    }
  }
  if (v.is_array() && s.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i) validate_at(v[i], s["items"], path + "[" + std::to_string(i) + "]", errors);
  }
  if (s.contains("allOf")) {
    for (const auto& sub : s["allOf"]) validate_at(v, sub, path, errors);
  }
  if (s.contains("if") && s.contains("then")) {
    std::vector<std::string> probe;
    validate_at(v, s["if"], path, probe);
    if (probe.empty()) validate_at(v, s["then"], path, errors);
  }
}

}  // namespace

std::vector<std::string> validate_schema(const nlohmann::json& instance, const nlohmann::json& schema) {
  std::vector<std::string> errors;
  validate_at(instance, schema, "$", errors);
  return errors;
}

}  // namespace greenkernel
