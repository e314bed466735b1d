#include "greenkernel/grp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "greenkernel/error.hpp"

namespace greenkernel {

namespace {

void check_perm(const Perm& a, std::size_t degree) {
  if (a.size() != degree) throw InputError("permutation has degree " + std::to_string(a.size()) + ", expected " + std::to_string(degree));
  std::vector<bool> seen(degree, false);
  for (auto v : a) {
    if (v >= degree || seen[v]) throw InputError("not a permutation");
    seen[v] = true;
  }
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Perm perm_identity(std::size_t degree) {
  Perm out(degree);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

Perm perm_mul(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw InputError("permutations of different degree");
  Perm out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

Perm perm_inverse(const Perm& a) {
  Perm out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[a[i]] = static_cast<std::uint16_t>(i);
  return out;
}

Perm perm_pow(const Perm& a, std::int64_t e) {
  Perm base = e < 0 ? perm_inverse(a) : a;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  Perm out = perm_identity(a.size());
  while (k > 0) {
    if (k & 1) out = perm_mul(out, base);
    base = perm_mul(base, base);
    k >>= 1;
  }
  return out;
}

Perm perm_conjugate(const Perm& g, const Perm& x) { return perm_mul(perm_mul(g, x), perm_inverse(g)); }

std::uint64_t perm_order(const Perm& a) {
  std::uint64_t order = 1;
  std::vector<bool> seen(a.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = a[j]) {
      seen[j] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

bool perm_is_identity(const Perm& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != i) return false;
  }
  return true;
}

Perm parse_cycles(std::string_view text, std::size_t degree) {
  std::vector<std::vector<std::size_t>> cycles;
  std::size_t largest = 0;
  bool open = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '(') {
      if (open) throw InputError("nested '(' in cycle notation");
      open = true;
      cycles.emplace_back();
      ++i;
    } else if (c == ')') {
      if (!open) throw InputError("unmatched ')' in cycle notation");
      open = false;
      ++i;
    } else if (c == ' ' || c == ',' || c == '\t' || c == '\r') {
      ++i;
    } else if (c >= '0' && c <= '9') {
      if (!open) throw InputError("point outside a cycle");
      std::size_t v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        v = v * 10 + static_cast<std::size_t>(text[i] - '0');
        if (v > 65535) throw InputError("point too large");
        ++i;
      }
      if (v == 0) throw InputError("points are numbered from 1");
      cycles.back().push_back(v - 1);
      largest = std::max(largest, v);
    } else {
      throw InputError(std::string("unexpected character '") + c + "' in cycle notation");
    }
  }
  if (open) throw InputError("unterminated cycle");
  if (cycles.empty()) throw InputError("no cycles given");
  if (degree == 0) degree = std::max<std::size_t>(largest, 1);
  if (largest > degree) throw InputError("point exceeds the degree");
  Perm out = perm_identity(degree);
  std::vector<bool> used(degree, false);
  for (const auto& cyc : cycles) {
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      if (used[cyc[k]]) throw InputError("point repeated in cycle notation");
      used[cyc[k]] = true;
      out[cyc[k]] = static_cast<std::uint16_t>(cyc[(k + 1) % cyc.size()]);
    }
  }
  return out;
}

std::string cycle_string(const Perm& a) {
  std::string out;
  std::vector<bool> seen(a.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (seen[i] || a[i] == i) continue;
    out += '(';
    for (std::size_t j = i; !seen[j]; j = a[j]) {
      seen[j] = true;
      if (j != i) out += ' ';
      out += std::to_string(j + 1);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

PermGroup::PermGroup(std::size_t degree, std::vector<Perm> generators, std::size_t budget)
    : degree_(degree), generators_(std::move(generators)) {
  if (degree == 0) throw InputError("degree must be positive");
  for (const auto& g : generators_) check_perm(g, degree);
  std::set<Perm> seen{perm_identity(degree)};
  std::vector<Perm> frontier{perm_identity(degree)};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& x : frontier) {
      for (const auto& g : generators_) {
        Perm y = perm_mul(g, x);
        if (seen.insert(y).second) {
          if (seen.size() > budget) {
            throw BudgetError("group order exceeds the element budget", seen.size());
          }
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  elements_.assign(seen.begin(), seen.end());
}

bool PermGroup::contains(const Perm& a) const { return std::binary_search(elements_.begin(), elements_.end(), a); }

std::size_t PermGroup::index_of(const Perm& a) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), a);
  if (it == elements_.end() || *it != a) throw InputError("element not in group: " + cycle_string(a));
  return static_cast<std::size_t>(it - elements_.begin());
}

bool PermGroup::is_abelian() const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    for (std::size_t j = i + 1; j < generators_.size(); ++j) {
      if (perm_mul(generators_[i], generators_[j]) != perm_mul(generators_[j], generators_[i])) return false;
    }
  }
  return true;
}

bool PermGroup::is_subgroup_of(const PermGroup& g) const {
  if (g.degree() != degree_) return false;
  return std::all_of(elements_.begin(), elements_.end(), [&](const Perm& a) { return g.contains(a); });
}

std::string PermGroup::description() const {
  std::string out = "order " + std::to_string(order()) + " <";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (i > 0) out += ", ";
    out += cycle_string(generators_[i]);
  }
  return out + ">";
}

GroupPtr group_from_generators(std::size_t degree, std::vector<Perm> perms, std::size_t budget) {
  return std::make_shared<const PermGroup>(degree, std::move(perms), budget);
}

GroupPtr subgroup(const PermGroup& g, std::vector<Perm> gens) {
  for (const auto& x : gens) {
    if (!g.contains(x)) throw InputError("generator " + cycle_string(x) + " is not in the group");
  }
  return group_from_generators(g.degree(), std::move(gens), g.order());
}

GroupPtr conjugate_subgroup(const Perm& g, const PermGroup& h) {
  std::vector<Perm> gens;
  for (const auto& x : h.generators()) gens.push_back(perm_conjugate(g, x));
  return group_from_generators(h.degree(), std::move(gens), h.order());
}

GroupPtr intersect(const PermGroup& a, const PermGroup& b) {
  if (a.degree() != b.degree()) throw InputError("groups act on different degrees");
  std::vector<Perm> common;
  for (const auto& x : a.elements()) {
    if (b.contains(x) && !perm_is_identity(x)) common.push_back(x);
  }
  // Keep a small generating set: add an element only if it enlarges the span.
  std::vector<Perm> gens;
  auto current = group_from_generators(a.degree(), {}, a.order());
  for (const auto& x : common) {
    if (current->contains(x)) continue;
    gens.push_back(x);
    current = group_from_generators(a.degree(), gens, a.order());
  }
  return current;
}

std::uint64_t p_part(std::uint64_t n, std::uint32_t p) {
  std::uint64_t out = 1;
  while (n > 0 && n % p == 0) {
    n /= p;
    out *= p;
  }
  return out;
}

GroupPtr sylow(const PermGroup& g, std::uint32_t p) {
  if (p < 2) throw InputError("p must be prime");
  const std::uint64_t target = p_part(g.order(), p);
  std::vector<Perm> p_elements;
  for (const auto& x : g.elements()) {
    if (!perm_is_identity(x) && p_part(perm_order(x), p) == perm_order(x)) p_elements.push_back(x);
  }
  std::vector<Perm> gens;
  auto current = group_from_generators(g.degree(), {}, g.order());
  while (current->order() < target) {
    bool grew = false;
    for (const auto& x : p_elements) {
      if (current->contains(x)) continue;
      auto trial_gens = gens;
      trial_gens.push_back(x);
      auto trial = group_from_generators(g.degree(), trial_gens, g.order());
      if (target % trial->order() == 0) {
        gens = std::move(trial_gens);
        current = std::move(trial);
        grew = true;
        break;
      }
    }
    if (!grew) throw InvariantError("greedy Sylow search stalled below order " + std::to_string(target));
  }
  return current;
}

std::vector<Perm> double_cosets(const PermGroup& g, const PermGroup& l, const PermGroup& k) {
  if (!l.is_subgroup_of(g) || !k.is_subgroup_of(g)) throw InputError("double cosets need subgroups of G");
  std::vector<bool> covered(g.order(), false);
  std::vector<Perm> reps;
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (covered[i]) continue;
    const Perm& x = g.elements()[i];
    reps.push_back(x);
    for (const auto& a : l.elements()) {
      const Perm ax = perm_mul(a, x);
      for (const auto& b : k.elements()) covered[g.index_of(perm_mul(ax, b))] = true;
    }
  }
  return reps;
}

std::vector<GroupPtr> small_subgroups(const PermGroup& g) {
  // Distinct cyclic subgroups first, then pairs of their generators.
  std::map<std::vector<Perm>, GroupPtr> seen;
  std::vector<Perm> cyclic_gens;
  for (const auto& x : g.elements()) {
    auto c = group_from_generators(g.degree(), {x}, g.order());
    if (seen.emplace(c->elements(), c).second) cyclic_gens.push_back(x);
  }
  for (std::size_t i = 0; i < cyclic_gens.size(); ++i) {
    for (std::size_t j = i + 1; j < cyclic_gens.size(); ++j) {
      auto h = group_from_generators(g.degree(), {cyclic_gens[i], cyclic_gens[j]}, g.order());
      seen.emplace(h->elements(), h);
    }
  }
  std::vector<GroupPtr> out;
  for (auto& [elts, h] : seen) out.push_back(h);
  std::stable_sort(out.begin(), out.end(), [](const GroupPtr& a, const GroupPtr& b) { return a->order() < b->order(); });
  return out;
}

GroupPtr named_group(std::string_view name) {
  std::string n;
  for (char c : name) {
    if (c != '_') n += c;
  }
  auto number = [&](std::size_t from) -> std::size_t {
    if (from >= n.size()) throw InputError("unknown group name: " + std::string(name));
    std::size_t v = 0;
    for (std::size_t i = from; i < n.size(); ++i) {
      if (n[i] < '0' || n[i] > '9') throw InputError("unknown group name: " + std::string(name));
      v = v * 10 + static_cast<std::size_t>(n[i] - '0');
      if (v > 1000) throw InputError("group name parameter too large: " + std::string(name));
    }
    return v;
  };
  auto cycle = [](std::size_t degree, std::size_t len) {
    Perm out = perm_identity(degree);
    for (std::size_t i = 0; i < len; ++i) out[i] = static_cast<std::uint16_t>((i + 1) % len);
    return out;
  };
  if (n == "A4") return group_from_generators(4, {parse_cycles("(1 2 3)", 4), parse_cycles("(1 2)(3 4)", 4)});
  if (n == "V4") return group_from_generators(4, {parse_cycles("(1 2)(3 4)", 4), parse_cycles("(1 3)(2 4)", 4)});
  if (n.size() >= 2 && n[0] == 'C') {
    const std::size_t k = number(1);
    if (k < 1) throw InputError("C_n needs n >= 1");
    return group_from_generators(k, {cycle(k, k)});
  }
  if (n.size() >= 2 && n[0] == 'S') {
    const std::size_t k = number(1);
    if (k < 1 || k > 5) throw InputError("S_n is available for 1 <= n <= 5");
    if (k == 1) return group_from_generators(1, {});
    return group_from_generators(k, {cycle(k, 2), cycle(k, k)});
  }
  if (n.size() >= 2 && n[0] == 'D') {
    const std::size_t k = number(1);
    if (k < 3) throw InputError("D_n needs n >= 3");
    Perm flip(k);
    for (std::size_t i = 0; i < k; ++i) flip[i] = static_cast<std::uint16_t>((k - i) % k);
    return group_from_generators(k, {cycle(k, k), flip});
  }
  throw InputError("unknown group name: " + std::string(name));
}

GroupPtr parse_group_file(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    ++lineno;
    std::string line(text.substr(start, end - start));
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.emplace_back(lineno, line);
    start = end + 1;
  }
  if (lines.empty()) throw InputError("group file has no generators");
  std::vector<Perm> raw;
  std::size_t degree = 1;
  for (const auto& [no, line] : lines) {
    try {
      raw.push_back(parse_cycles(line));
    } catch (const InputError& e) {
      throw InputError("group file line " + std::to_string(no) + ": " + e.what());
    }
    degree = std::max(degree, raw.back().size());
  }
  for (auto& g : raw) {
    const std::size_t old = g.size();
    g.resize(degree);
    for (std::size_t i = old; i < degree; ++i) g[i] = static_cast<std::uint16_t>(i);
  }
  return group_from_generators(degree, std::move(raw));
}

AbelianPGroup::AbelianPGroup(GroupPtr group, std::uint32_t p, std::vector<Perm> basis,
                             std::vector<std::uint32_t> exponents)
    : group_(std::move(group)), p_(p), basis_(std::move(basis)), exponents_(std::move(exponents)) {
  if (basis_.size() != exponents_.size()) throw InputError("basis and exponents differ in length");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (exponents_[i] == 0 || perm_order(basis_[i]) != ipow(p_, exponents_[i])) {
      throw InputError("basis element " + cycle_string(basis_[i]) + " has the wrong order");
    }
    if (i > 0 && exponents_[i] > exponents_[i - 1]) throw InputError("basis orders must be non-increasing");
    if (!group_->contains(basis_[i])) throw InputError("basis element outside the group");
    total *= ipow(p_, exponents_[i]);
  }
  if (total != group_->order()) throw InputError("basis orders do not multiply to the group order");
  for (const auto& a : basis_) {
    for (const auto& b : basis_) {
      if (perm_mul(a, b) != perm_mul(b, a)) throw InputError("group is not abelian");
    }
  }
  coords_.assign(group_->order(), {});
  std::vector<bool> hit(group_->order(), false);
  std::vector<std::int64_t> c(basis_.size(), 0);
  while (true) {
    const std::size_t idx = group_->index_of(element(c));
    if (hit[idx]) throw InputError("basis is not independent");
    hit[idx] = true;
    coords_[idx] = c;
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == static_cast<std::int64_t>(basis_order(i))) c[i++] = 0;
    if (i == c.size()) break;
  }
}

std::uint64_t AbelianPGroup::basis_order(std::size_t i) const { return ipow(p_, exponents_[i]); }

Perm AbelianPGroup::element(std::span<const std::int64_t> coords) const {
  if (coords.size() != basis_.size()) throw InputError("coordinate vector has the wrong length");
  Perm out = perm_identity(group_->degree());
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    out = perm_mul(out, perm_pow(basis_[i], mod(coords[i], static_cast<std::int64_t>(basis_order(i)))));
  }
  return out;
}

std::vector<std::int64_t> AbelianPGroup::coordinates(const Perm& a) const { return coords_[group_->index_of(a)]; }

AbelianPGroup abelian_decompose(GroupPtr a, std::uint32_t p) {
  if (p_part(a->order(), p) != a->order()) throw InputError("not a p-group for p = " + std::to_string(p));
  if (!a->is_abelian()) throw InputError("group is not abelian");
  std::vector<Perm> basis;
  std::vector<std::uint32_t> exps;
  // Elements of the span of the basis so far, with their coordinates.
  std::map<Perm, std::vector<std::int64_t>> span{{a->identity(), {}}};
  while (span.size() < a->order()) {
    const Perm* best = nullptr;
    std::uint32_t best_e = 0;
    for (const auto& h : a->elements()) {
      std::uint32_t e = 0;
      Perm y = h;
      while (!span.count(y)) {
        y = perm_pow(y, p);
        ++e;
      }
      if (e > best_e) {
        best_e = e;
        best = &h;
      }
    }
    // h^{p^e} = prod g_i^{c_i}; divide each c_i by p^e and correct h.
    const std::int64_t pe = static_cast<std::int64_t>(ipow(p, best_e));
    const auto& c = span.at(perm_pow(*best, pe));
    Perm lifted = *best;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] % pe != 0) throw InvariantError("abelian decomposition lift failed");
      lifted = perm_mul(lifted, perm_pow(basis[i], -c[i] / pe));
    }
    if (perm_order(lifted) != static_cast<std::uint64_t>(pe)) throw InvariantError("lifted element has the wrong order");
    std::map<Perm, std::vector<std::int64_t>> grown;
    for (const auto& [s, sc] : span) {
      Perm cur = s;
      for (std::int64_t k = 0; k < pe; ++k) {
        auto coords = sc;
        coords.push_back(k);
        grown.emplace(cur, std::move(coords));
        cur = perm_mul(cur, lifted);
      }
    }
    span = std::move(grown);
    basis.push_back(std::move(lifted));
    exps.push_back(best_e);
  }
  return AbelianPGroup(std::move(a), p, std::move(basis), std::move(exps));
}

Perm AbelianHom::apply(const Perm& a) const {
  const auto c = source->coordinates(a);
  std::vector<std::int64_t> out(target->rank(), 0);
  for (std::size_t j = 0; j < target->rank(); ++j) {
    for (std::size_t i = 0; i < source->rank(); ++i) out[j] += matrix[j][i] * c[i];
  }
  return target->element(out);
}

bool AbelianHom::is_injective() const {
  std::size_t kernel = 0;
  for (const auto& a : source->group()->elements()) kernel += perm_is_identity(apply(a)) ? 1 : 0;
  return kernel == 1;
}

bool AbelianHom::is_surjective() const {
  std::set<Perm> image;
  for (const auto& a : source->group()->elements()) image.insert(apply(a));
  return image.size() == target->group()->order();
}

AbelianHom hom_from_matrix(std::shared_ptr<const AbelianPGroup> source, std::shared_ptr<const AbelianPGroup> target,
                           std::vector<std::vector<std::int64_t>> matrix) {
  if (source->p() != target->p()) throw InputError("homomorphism between groups at different primes");
  if (matrix.size() != target->rank()) throw InputError("matrix needs one row per target generator");
  for (std::size_t j = 0; j < target->rank(); ++j) {
    if (matrix[j].size() != source->rank()) throw InputError("matrix needs one column per source generator");
    const auto sj = static_cast<std::int64_t>(target->basis_order(j));
    for (std::size_t i = 0; i < source->rank(); ++i) {
      matrix[j][i] = mod(matrix[j][i], sj);
      const auto ri = static_cast<std::int64_t>(source->basis_order(i));
      // p^{r_i} m_ji must vanish mod p^{s_j}.
      if (ri < sj && (matrix[j][i] * ri) % sj != 0) {
        throw InputError("image order violates source order at entry (" + std::to_string(j) + ", " +
                         std::to_string(i) + ")");
      }
    }
  }
  return AbelianHom{std::move(source), std::move(target), std::move(matrix)};
}

AbelianHom hom_between(std::shared_ptr<const AbelianPGroup> source, std::shared_ptr<const AbelianPGroup> target,
                       std::span<const Perm> images) {
  if (images.size() != source->rank()) throw InputError("need one image per source generator");
  std::vector<std::vector<std::int64_t>> m(target->rank(), std::vector<std::int64_t>(source->rank(), 0));
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto c = target->coordinates(images[i]);
    for (std::size_t j = 0; j < target->rank(); ++j) m[j][i] = c[j];
  }
  return hom_from_matrix(std::move(source), std::move(target), std::move(m));
}

AbelianHom hom_compose(const AbelianHom& beta, const AbelianHom& alpha) {
  if (!alpha.target->group()->same_elements(*beta.source->group()) || alpha.target->basis() != beta.source->basis()) {
    throw InputError("homomorphisms are not composable");
  }
  const std::size_t k = alpha.source->rank();
  const std::size_t mid = alpha.target->rank();
  const std::size_t t = beta.target->rank();
  std::vector<std::vector<std::int64_t>> m(t, std::vector<std::int64_t>(k, 0));
  for (std::size_t a = 0; a < t; ++a) {
    const auto order = static_cast<std::int64_t>(beta.target->basis_order(a));
    for (std::size_t i = 0; i < k; ++i) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < mid; ++j) acc = mod(acc + beta.matrix[a][j] * alpha.matrix[j][i], order);
      m[a][i] = acc;
    }
  }
  return hom_from_matrix(alpha.source, beta.target, std::move(m));
}

PermHom::PermHom(GroupPtr source, GroupPtr target, std::span<const Perm> generator_images)
    : source_(std::move(source)), target_(std::move(target)) {
  const auto& gens = source_->generators();
  if (generator_images.size() != gens.size()) throw InputError("need one image per source generator");
  for (const auto& y : generator_images) {
    if (!target_->contains(y)) throw InputError("image " + cycle_string(y) + " is not in the target");
  }
  std::vector<bool> known(source_->order(), false);
  table_.assign(source_->order(), Perm{});
  const std::size_t e = source_->index_of(source_->identity());
  table_[e] = target_->identity();
  known[e] = true;
  std::vector<std::size_t> frontier{e};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (auto xi : frontier) {
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const std::size_t yi = source_->index_of(perm_mul(gens[k], source_->elements()[xi]));
        if (known[yi]) continue;
        known[yi] = true;
        table_[yi] = perm_mul(generator_images[k], table_[xi]);
        next.push_back(yi);
      }
    }
    frontier = std::move(next);
  }
  for (std::size_t xi = 0; xi < source_->order(); ++xi) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const std::size_t yi = source_->index_of(perm_mul(gens[k], source_->elements()[xi]));
      if (table_[yi] != perm_mul(generator_images[k], table_[xi])) {
        throw InputError("generator images do not define a homomorphism");
      }
    }
  }
}

std::size_t PermHom::kernel_order() const {
  return static_cast<std::size_t>(std::count_if(table_.begin(), table_.end(), [](const Perm& y) { return perm_is_identity(y); }));
}

bool PermHom::is_surjective() const {
  return std::set<Perm>(table_.begin(), table_.end()).size() == target_->order();
}

bool is_normal(const PermGroup& k, const PermGroup& g) {
  if (!k.is_subgroup_of(g)) return false;
  for (const auto& s : g.generators())
    for (const auto& x : k.generators())
      if (!k.contains(perm_conjugate(s, x))) return false;
  return true;
}

PermHom quotient_map(GroupPtr g, const PermGroup& k) {
  if (!is_normal(k, *g)) throw InputError("not a normal subgroup: " + k.description());
  // Each coset is named by its smallest element.
  std::vector<Perm> reps;
  for (const auto& x : g->elements()) {
    bool fresh = true;
    for (const auto& y : k.elements()) {
      const Perm xy = perm_mul(x, y);
      if (xy < x) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(x);
  }
  auto coset_of = [&](const Perm& x) {
    Perm best = x;
    for (const auto& y : k.elements()) best = std::min(best, perm_mul(x, y));
    return static_cast<std::uint16_t>(std::lower_bound(reps.begin(), reps.end(), best) - reps.begin());
  };
  std::vector<Perm> images;
  for (const auto& s : g->generators()) {
    Perm img(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) img[i] = coset_of(perm_mul(s, reps[i]));
    images.push_back(std::move(img));
  }
  auto target = group_from_generators(reps.size(), images, g->order());
  return PermHom(std::move(g), std::move(target), images);
}

std::shared_ptr<const AbelianPGroup> cyclic_product(std::uint32_t p, std::vector<std::uint32_t> type) {
  std::sort(type.begin(), type.end(), std::greater<>());
  std::size_t degree = 0;
  for (auto r : type) {
    if (r == 0) throw InputError("cyclic factors need r >= 1");
    degree += ipow(p, r);
  }
  if (degree > 65535) throw BudgetError("cyclic product needs too many points", degree);
  const std::size_t d = std::max<std::size_t>(degree, 1);
  std::vector<Perm> gens;
  std::size_t offset = 0;
  for (auto r : type) {
    const std::size_t len = ipow(p, r);
    Perm g = perm_identity(d);
    for (std::size_t i = 0; i < len; ++i) g[offset + i] = static_cast<std::uint16_t>(offset + (i + 1) % len);
    gens.push_back(std::move(g));
    offset += len;
  }
  auto group = group_from_generators(d, gens);
  return std::make_shared<const AbelianPGroup>(std::move(group), p, std::move(gens), std::move(type));
}

}  // namespace greenkernel
