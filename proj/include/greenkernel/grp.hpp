#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace greenkernel {

inline constexpr std::size_t kDefaultGroupBudget = 1000;

/// Permutation of {0, ..., d-1} as its image list.
using Perm = std::vector<std::uint16_t>;

Perm perm_identity(std::size_t degree);
/// (a * b)(i) = a(b(i)): apply b first.
Perm perm_mul(const Perm& a, const Perm& b);
Perm perm_inverse(const Perm& a);
Perm perm_pow(const Perm& a, std::int64_t e);
/// g x g^{-1}.
Perm perm_conjugate(const Perm& g, const Perm& x);
std::uint64_t perm_order(const Perm& a);
bool perm_is_identity(const Perm& a);

/// Parses "(1 2 3)(4 5)" with 1-based points; "()" is the identity. Degree 0 means "largest point".
Perm parse_cycles(std::string_view text, std::size_t degree = 0);
/// 1-based cycle notation, "()" for the identity.
std::string cycle_string(const Perm& a);

/// A permutation group with all elements enumerated and sorted lexicographically.
class PermGroup {
 public:
  PermGroup(std::size_t degree, std::vector<Perm> generators, std::size_t budget = kDefaultGroupBudget);

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Perm>& generators() const noexcept { return generators_; }
  const std::vector<Perm>& elements() const noexcept { return elements_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const Perm& identity() const noexcept { return elements_.front(); }

  bool contains(const Perm& a) const;
  /// Position in elements(); throws InputError if absent.
  std::size_t index_of(const Perm& a) const;
  bool is_abelian() const;
  bool is_subgroup_of(const PermGroup& g) const;
  bool same_elements(const PermGroup& o) const { return elements_ == o.elements_; }
  std::string description() const;

 private:
  std::size_t degree_;
  std::vector<Perm> generators_;
  std::vector<Perm> elements_;
};

using GroupPtr = std::shared_ptr<const PermGroup>;

GroupPtr group_from_generators(std::size_t degree, std::vector<Perm> perms,
                               std::size_t budget = kDefaultGroupBudget);

/// The subgroup of g generated by elements of g.
GroupPtr subgroup(const PermGroup& g, std::vector<Perm> gens);
/// g H g^{-1}.
GroupPtr conjugate_subgroup(const Perm& g, const PermGroup& h);
GroupPtr intersect(const PermGroup& a, const PermGroup& b);

/// Largest power of p dividing n.
std::uint64_t p_part(std::uint64_t n, std::uint32_t p);

/// A Sylow p-subgroup, built greedily from p-elements in element order.
GroupPtr sylow(const PermGroup& g, std::uint32_t p);

/// Smallest representative of each double coset L g K, in element order.
std::vector<Perm> double_cosets(const PermGroup& g, const PermGroup& l, const PermGroup& k);

/// Every subgroup generated by at most two elements, deduplicated, ordered by size then elements.
std::vector<GroupPtr> small_subgroups(const PermGroup& g);

/// C_n, S_n (n <= 5), A_4, V_4, D_n (order 2n). Accepts "C4" or "C_4".
GroupPtr named_group(std::string_view name);

/// One generator per line in cycle notation, '#' comments; errors name the line.
GroupPtr parse_group_file(std::string_view text);

/// An abelian p-group with a cyclic basis g_1..g_k of orders p^{r_1} >= ... >= p^{r_k}.
class AbelianPGroup {
 public:
  AbelianPGroup(GroupPtr group, std::uint32_t p, std::vector<Perm> basis, std::vector<std::uint32_t> exponents);

  const GroupPtr& group() const noexcept { return group_; }
  std::uint32_t p() const noexcept { return p_; }
  const std::vector<Perm>& basis() const noexcept { return basis_; }
  /// r_i with |g_i| = p^{r_i}.
  const std::vector<std::uint32_t>& type() const noexcept { return exponents_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  std::uint64_t basis_order(std::size_t i) const;

  /// prod g_i^{a_i}.
  Perm element(std::span<const std::int64_t> coords) const;
  /// The unique coordinates with 0 <= a_i < p^{r_i}.
  std::vector<std::int64_t> coordinates(const Perm& a) const;

 private:
  GroupPtr group_;
  std::uint32_t p_;
  std::vector<Perm> basis_;
  std::vector<std::uint32_t> exponents_;
  std::vector<std::vector<std::int64_t>> coords_;  // indexed like group_->elements()
};

/// Greedy maximal-order extraction with lift correction; verifies the coordinate bijection.
AbelianPGroup abelian_decompose(GroupPtr a, std::uint32_t p);

/// alpha(g_i) = prod_j h_j^{m[j][i]}, entries reduced mod the target orders.
struct AbelianHom {
  std::shared_ptr<const AbelianPGroup> source;
  std::shared_ptr<const AbelianPGroup> target;
  std::vector<std::vector<std::int64_t>> matrix;

  Perm apply(const Perm& a) const;
  bool is_injective() const;
  bool is_surjective() const;
};

/// Homomorphism given by the images of the source basis; checks the order congruences.
AbelianHom hom_between(std::shared_ptr<const AbelianPGroup> source, std::shared_ptr<const AbelianPGroup> target,
                       std::span<const Perm> images);

/// Homomorphism from its matrix.
AbelianHom hom_from_matrix(std::shared_ptr<const AbelianPGroup> source, std::shared_ptr<const AbelianPGroup> target,
                           std::vector<std::vector<std::int64_t>> matrix);

/// beta after alpha.
AbelianHom hom_compose(const AbelianHom& beta, const AbelianHom& alpha);

/// A homomorphism between permutation groups, tabulated on every source element.
class PermHom {
 public:
  /// Extends generator images of the source; throws InputError if they do not define a homomorphism.
  PermHom(GroupPtr source, GroupPtr target, std::span<const Perm> generator_images);

  const GroupPtr& source() const noexcept { return source_; }
  const GroupPtr& target() const noexcept { return target_; }
  const Perm& apply(const Perm& a) const { return table_[source_->index_of(a)]; }
  std::size_t kernel_order() const;
  bool is_surjective() const;

 private:
  GroupPtr source_;
  GroupPtr target_;
  std::vector<Perm> table_;
};

/// k is a normal subgroup of g.
bool is_normal(const PermGroup& k, const PermGroup& g);

/// G -> G/K realized by the action of G on the left cosets of a normal subgroup K.
PermHom quotient_map(GroupPtr g, const PermGroup& k);

/// A concrete product of cyclic groups C_{p^{r_1}} x ... acting on disjoint orbits.
std::shared_ptr<const AbelianPGroup> cyclic_product(std::uint32_t p, std::vector<std::uint32_t> type);

}  // namespace greenkernel
