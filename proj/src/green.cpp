#include "greenkernel/green.hpp"

#include <tuple>

#include "greenkernel/error.hpp"
#include "greenkernel/hopftower.hpp"

namespace greenkernel {

namespace {

std::string abelian_label(std::uint32_t p, const std::vector<std::uint32_t>& type) {
  if (type.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (i > 0) out += " x ";
    out += "C" + std::to_string(checked_power(p, type[i]));
  }
  return out;
}

std::shared_ptr<const AbelianPGroup> decompose(const PermGroup& q, std::uint32_t p) {
  return std::make_shared<const AbelianPGroup>(abelian_decompose(std::make_shared<const PermGroup>(q), p));
}

/// Restriction along the inclusion of q into the decomposed group `into`.
AlgebraMap inclusion_restriction(const std::shared_ptr<const AbelianPGroup>& q,
                                 const std::shared_ptr<const AbelianPGroup>& into, const GreenParams& params) {
  return restrict(hom_between(q, into, q->basis()), params);
}

/// Restriction A(Q') -> A(Q) along Q -> Q', y |-> g^{-1} y g.
AlgebraMap conjugation_restriction(const Perm& g, const std::shared_ptr<const AbelianPGroup>& q,
                                   const std::shared_ptr<const AbelianPGroup>& qprime, const GreenParams& params) {
  const Perm ginv = perm_inverse(g);
  std::vector<Perm> images;
  for (const auto& b : q->basis()) images.push_back(perm_conjugate(ginv, b));
  return restrict(hom_between(q, qprime, images), params);
}

FpMatrix difference(const FpMatrix& a, const FpMatrix& b) { return a - b; }

GreenValue make_value(std::string label, AlgebraPtr algebra, const GreenParams& params) {
  FrobeniusForm form = canonical_form(algebra);
  auto trivial = value_abelian({}, params);
  GreenValue v{std::move(label), {}, nullptr, algebra, form, {}};
  const AlgebraMap ind = transfer(augmentation(algebra), v, *trivial);
  v.ind_one = ind.apply(trivial->algebra->one());
  return v;
}

}  // namespace

GreenParams make_green_params(std::uint32_t p, std::uint32_t n, std::size_t budget) {
  if (!is_prime(p)) throw InputError("p must be prime");
  if (n < 1) throw InputError("n must be at least 1");
  const std::uint64_t q = checked_power(p, n);
  if (budget < q) throw InputError("budget must be at least p^n = " + std::to_string(q));
  return GreenParams{p, n, budget};
}

GreenValuePtr value_abelian(const std::vector<std::uint32_t>& type, const GreenParams& params) {
  std::uint64_t dim = 1;
  std::uint32_t total = 0;
  for (auto r : type) {
    if (r == 0) throw InputError("cyclic factors need r >= 1");
    total += r;
  }
  dim = checked_power(checked_power(params.p, params.n), total);
  if (dim > params.budget) throw BudgetError("value dimension exceeds the size budget", dim);
  static OnceCache<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>, GreenValue> cache;
  return cache.get({params.p, params.n, type}, [&] {
    std::vector<BorelPtr> factors;
    for (auto r : type) factors.push_back(honda_level(params.p, params.n, r)->algebra());
    BorelPtr a = tensor_all(params.p, factors);
    FrobeniusForm form = canonical_form(a);
    GreenValue v{abelian_label(params.p, type), type, a, a, form, {}};
    if (type.empty()) {
      v.ind_one = a->one();
    } else {
      auto trivial = value_abelian({}, params);
      v.ind_one = transfer(augmentation(a), v, *trivial).apply(trivial->algebra->one());
    }
    return v;
  });
}

AlgebraMap augmentation(const AlgebraPtr& a) {
  auto fp = value_abelian({}, GreenParams{a->field().p(), 1, 1})->algebra;
  FpMatrix m(a->field(), 1, a->dim());
  m(0, 0) = 1;
  return AlgebraMap(a, fp, std::move(m), true, false);
}

AlgebraMap restrict(const AbelianHom& alpha, const GreenParams& params) {
  if (alpha.source->p() != params.p) throw InputError("homomorphism is at a different prime");
  const auto vg = value_abelian(alpha.source->type(), params);
  const auto vh = value_abelian(alpha.target->type(), params);
  const BorelAlgebra& ag = *vg->borel;
  const PrimeField& f = ag.field();
  const std::uint32_t p = params.p;
  const std::uint64_t q = checked_power(p, params.n);
  const auto& rs = alpha.source->type();
  const auto& ss = alpha.target->type();
  std::vector<Vec> images;
  for (std::size_t j = 0; j < ss.size(); ++j) {
    const std::uint32_t s = ss[j];
    FglPtr law = level_fgl(p, params.n, s);
    FpPoly acc(f, ag.layout());
    bool first = true;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const std::int64_t m = alpha.matrix[j][i];
      if (m == 0) continue;
      const std::uint32_t r = rs[i];
      // m = m' p^{max(s - r, 0)}; the component image is [m'](x_i^{q^{max(r - s, 0)}}).
      const auto shift = static_cast<std::int64_t>(checked_power(p, s > r ? s - r : 0));
      if (m % shift != 0) throw InvariantError("homomorphism entry violates the order congruence");
      const std::int64_t mprime = m / shift;
      const std::uint32_t cap = static_cast<std::uint32_t>(checked_power(q, r));
      const FpPoly series = level_fgl(p, params.n, r)->m_series(mprime, cap);
      const FpPoly y = FpPoly::variable(f, ag.layout(), i).pow(checked_power(q, r > s ? r - s : 0));
      const FpPoly component = series.substitute(std::vector<FpPoly>{y});
      acc = first ? component : law->add(acc, component);
      first = false;
    }
    images.push_back(ag.from_poly(acc));
  }
  try {
    return algebra_map(vh->borel, vg->borel, images);
  } catch (const InputError& e) {
    throw InvariantError(std::string("restriction is not an algebra map: ") + e.what());
  }
}

AlgebraMap transfer(const AlgebraMap& res, const GreenValue& k, const GreenValue& h) {
  return gysin(res, k.form, h.form);
}

bool frobenius_identity_exhaustive(const AlgebraMap& res, const AlgebraMap& ind) {
  const LocalAlgebra& ak = *res.source();
  const LocalAlgebra& ah = *res.target();
  for (std::size_t i = 0; i < ah.dim(); ++i) {
    const Vec x = ah.basis_vector(i);
    const Vec ind_x = ind.apply(x);
    for (std::size_t j = 0; j < ak.dim(); ++j) {
      const Vec y = ak.basis_vector(j);
      if (ind.apply(ah.mul(x, res.apply(y))) != ak.mul(ind_x, y)) return false;
    }
  }
  return true;
}

GreenFunctor::Node build_node(GroupPtr h, const GreenParams& params) {
  const std::uint32_t p = params.p;
  GroupPtr syl = sylow(*h, p);
  if (!syl->is_abelian()) {
    throw ScopeError("Sylow " + std::to_string(p) + "-subgroup of order " + std::to_string(syl->order()) +
                     " is not abelian; out of modeled scope");
  }
  auto basis = decompose(*syl, p);
  auto pval = value_abelian(basis->type(), params);
  const PrimeField& f = pval->algebra->field();
  const std::size_t d = pval->algebra->dim();

  StableResult st;
  st.sylow = basis;
  st.double_coset_reps = double_cosets(*h, *syl, *syl);
  FpMatrix constraints(f, 0, d);
  std::vector<Vec> relations;
  for (const auto& g : st.double_coset_reps) {
    // Q = gPg^{-1} n P and Q' = P n g^{-1}Pg = g^{-1}Qg.
    auto q = decompose(*intersect(*conjugate_subgroup(g, *syl), *syl), p);
    auto qp = decompose(*intersect(*syl, *conjugate_subgroup(perm_inverse(g), *syl)), p);
    const AlgebraMap res_q = inclusion_restriction(q, basis, params);
    const AlgebraMap res_qp = inclusion_restriction(qp, basis, params);
    const AlgebraMap c_g = conjugation_restriction(g, q, qp, params);
    constraints = constraints.stacked(difference(res_q.matrix(), c_g.after(res_qp).matrix()));
    // ind^P_Q - ind^P_{Q'} c_{g^{-1}}, with c_{g^{-1}}: A(Q) -> A(Q') along y |-> g y g^{-1}.
    const auto vq = value_abelian(q->type(), params);
    const auto vqp = value_abelian(qp->type(), params);
    const AlgebraMap ind_q = transfer(res_q, *pval, *vq);
    const AlgebraMap ind_qp = transfer(res_qp, *pval, *vqp);
    const AlgebraMap c_ginv = conjugation_restriction(perm_inverse(g), qp, q, params);
    const FpMatrix diff = difference(ind_q.matrix(), ind_qp.after(c_ginv).matrix());
    for (std::size_t c = 0; c < diff.cols(); ++c) relations.push_back(diff.column(c));
  }
  st.lim_basis = span_basis(f, d, mat_kernel(constraints));
  st.colim_dim = d - span_basis(f, d, relations).size();
  st.subalgebra = subalgebra_close(pval->algebra, st.lim_basis);
  if (st.subalgebra->dim() != st.lim_basis.size()) {
    throw InvariantError("stable elements are not closed under multiplication");
  }
  std::string label = h->order() == syl->order() ? pval->label : "order " + std::to_string(h->order()) + " group";
  GreenValue value = make_value(std::move(label), st.subalgebra, params);
  return GreenFunctor::Node{std::move(h), std::move(syl), std::move(basis), std::move(pval), std::move(st),
                            std::move(value)};
}

AlgebraMap pullback_nodes(const GreenFunctor::Node& x, const GreenFunctor::Node& y, const std::vector<Perm>& images,
                          const GreenParams& params) {
  const PermGroup& gy = *y.group;
  const PermGroup& gx = *x.group;
  if (images.size() != gy.order()) throw InputError("need one image per element");
  auto phi = [&](const Perm& e) -> const Perm& { return images[gy.index_of(e)]; };
  // Conjugate phi(P_Y) into P_X.
  const Perm* found = nullptr;
  for (const auto& c : gx.elements()) {
    const Perm cinv = perm_inverse(c);
    bool ok = true;
    for (const auto& e : y.sylow->elements()) {
      if (!x.sylow->contains(perm_conjugate(cinv, phi(e)))) {
        ok = false;
        break;
      }
    }
    if (ok) {
      found = &c;
      break;
    }
  }
  if (!found) throw InvariantError("image of a Sylow subgroup is not conjugate into the Sylow subgroup");
  const Perm cinv = perm_inverse(*found);
  std::vector<Perm> basis_images;
  for (const auto& b : y.sylow_basis->basis()) basis_images.push_back(perm_conjugate(cinv, phi(b)));
  const AlgebraMap r = restrict(hom_between(y.sylow_basis, x.sylow_basis, basis_images), params);
  const auto& sx = *x.stable.subalgebra;
  const auto& sy = *y.stable.subalgebra;
  FpMatrix m(sx.field(), sy.dim(), sx.dim());
  for (std::size_t i = 0; i < sx.dim(); ++i) {
    const Vec img = r.apply(sx.basis()[i]);
    if (!sy.contains(img)) throw InvariantError("restriction leaves the stable elements");
    m.set_column(i, sy.coordinates(img));
  }
  return AlgebraMap(x.value.algebra, y.value.algebra, std::move(m), true, false);
}

GreenFunctor::GreenFunctor(GroupPtr g, GreenParams params) : group_(std::move(g)), params_(params) {}

GreenFunctor::NodePtr GreenFunctor::node(const PermGroup& h) const {
  if (!h.is_subgroup_of(*group_)) throw InputError("not a subgroup of G: " + h.description());
  return nodes_.get(h.elements(), [&] { return build_node(std::make_shared<const PermGroup>(h), params_); });
}

AlgebraMap GreenFunctor::pullback_table(const PermGroup& x, const PermGroup& y, const std::vector<Perm>& images) const {
  return pullback_nodes(*node(x), *node(y), images, params_);
}

AlgebraMap GreenFunctor::res(const PermGroup& k, const PermGroup& h) const {
  if (!h.is_subgroup_of(k)) throw InputError("restriction needs H <= K");
  return pullback(k, h, [](const Perm& e) { return e; });
}

AlgebraMap GreenFunctor::ind(const PermGroup& k, const PermGroup& h) const {
  return transfer(res(k, h), value(k), value(h));
}

AlgebraMap GreenFunctor::conj(const Perm& g, const PermGroup& h) const {
  auto ghg = conjugate_subgroup(g, h);
  const Perm ginv = perm_inverse(g);
  return pullback(h, *ghg, [&](const Perm& e) { return perm_conjugate(ginv, e); });
}

StableResult stable_elements(GroupPtr g, const GreenParams& params) {
  return build_node(std::move(g), params).stable;
}

SubalgebraPtr invariants(const GreenValue& value, const std::vector<AlgebraMap>& action) {
  const LocalAlgebra& a = *value.algebra;
  const PrimeField& f = a.field();
  const std::size_t d = a.dim();
  FpMatrix stacked(f, 0, d);
  for (const auto& m : action) {
    if (m.source()->dim() != d || m.target()->dim() != d) throw InputError("action map is not an endomorphism");
    if (!verify_algebra_map(m) || m.matrix().rank() != d) throw InputError("action map is not an algebra automorphism");
    stacked = stacked.stacked(m.matrix() - FpMatrix::identity(f, d));
  }
  auto fixed = span_basis(f, d, mat_kernel(stacked));
  return std::make_shared<const Subalgebra>(value.algebra, std::move(fixed));
}

std::vector<AlgebraMap> normalizer_action(const GreenFunctor& f) {
  const auto node = f.node(*f.group());
  const PermGroup& p = *node->sylow;
  const PermGroup& g = *f.group();
  std::vector<Perm> gens;
  GroupPtr span = std::make_shared<const PermGroup>(p);
  for (const auto& x : g.elements()) {
    if (span->contains(x)) continue;
    if (!conjugate_subgroup(x, p)->same_elements(p)) continue;
    gens.push_back(x);
    std::vector<Perm> all = p.generators();
    all.insert(all.end(), gens.begin(), gens.end());
    span = group_from_generators(g.degree(), all, g.order());
  }
  std::vector<AlgebraMap> out;
  for (const auto& x : gens) out.push_back(f.conj(x, p));
  return out;
}

GreenValue value_general(GroupPtr g, const GreenParams& params) {
  if (g->order() % params.p != 0) {
    auto trivial = value_abelian({}, params);
    GreenValue v = *trivial;
    v.label = "order " + std::to_string(g->order()) + " group";
    return v;
  }
  return build_node(std::move(g), params).value;
}

AlgebraMap inflation_inverse(const PermHom& beta, const GreenParams& params) {
  if (!beta.is_surjective()) throw InputError("inflation needs an epimorphism");
  if (beta.kernel_order() % params.p == 0) throw InputError("kernel order is divisible by p");
  const auto ng = build_node(beta.source(), params);
  const auto nh = build_node(beta.target(), params);
  std::vector<Perm> images;
  for (const auto& e : beta.source()->elements()) images.push_back(beta.apply(e));
  const AlgebraMap pull = pullback_nodes(nh, ng, images, params);
  auto inv = pull.matrix().inverse();
  if (!inv) throw InvariantError("restriction along a p'-kernel epimorphism is not invertible");
  return AlgebraMap(ng.value.algebra, nh.value.algebra, std::move(*inv), true, false);
}

}  // namespace greenkernel
