#pragma once

#include <memory>
#include <string>
#include <vector>

#include "greenkernel/frobform.hpp"
#include "greenkernel/grp.hpp"
#include "greenkernel/once_cache.hpp"

namespace greenkernel {

inline constexpr std::size_t kDefaultSizeBudget = 256;

/// p, n and the largest algebra dimension any value may reach.
struct GreenParams {
  std::uint32_t p = 2;
  std::uint32_t n = 1;
  std::size_t budget = kDefaultSizeBudget;
};

/// Validates p prime, n >= 1 and budget >= p^n.
GreenParams make_green_params(std::uint32_t p, std::uint32_t n, std::size_t budget = kDefaultSizeBudget);

/// The value A(G) with its canonical Frobenius form and ind^G_1(1).
struct GreenValue {
  std::string label;
  /// Abelian type (r_1, ..., r_k) for values on abelian p-groups.
  std::vector<std::uint32_t> type;
  /// Set for abelian values; the Borel algebra tensor_i H_{r_i}.
  BorelPtr borel;
  AlgebraPtr algebra;
  FrobeniusForm form;
  Vec ind_one;
};

using GreenValuePtr = std::shared_ptr<const GreenValue>;

/// A(C_{p^{r_1}} x ... ) = tensor of Honda levels, memoized per (p, n, type).
GreenValuePtr value_abelian(const std::vector<std::uint32_t>& type, const GreenParams& params);

/// The augmentation A -> F_p as an algebra map.
AlgebraMap augmentation(const AlgebraPtr& a);

/// Restriction A(H) -> A(G) along alpha: G -> H.
AlgebraMap restrict(const AbelianHom& alpha, const GreenParams& params);

/// ind = gysin(res) for the canonical forms: A(H) -> A(K), given res: A(K) -> A(H).
AlgebraMap transfer(const AlgebraMap& res, const GreenValue& k, const GreenValue& h);

/// ind(x res(y)) = ind(x) y on every pair of basis vectors.
bool frobenius_identity_exhaustive(const AlgebraMap& res, const AlgebraMap& ind);

struct StableResult {
  std::shared_ptr<const AbelianPGroup> sylow;
  /// Reduced echelon basis of the stable elements inside A(P).
  std::vector<Vec> lim_basis;
  /// dim A(P) minus the span of the transfer differences.
  std::size_t colim_dim = 0;
  SubalgebraPtr subalgebra;
  /// Double coset representatives of P\G/P used.
  std::vector<Perm> double_coset_reps;
};

/// Lazily built values and structure maps for subgroups of one finite group G.
///
/// A(H) is stored as a subalgebra of A(P_H) for the deterministic Sylow P_H of H.
/// Every P_H must be abelian; otherwise ScopeError.
class GreenFunctor {
 public:
  struct Node {
    GroupPtr group;
    GroupPtr sylow;
    std::shared_ptr<const AbelianPGroup> sylow_basis;
    GreenValuePtr sylow_value;
    StableResult stable;
    GreenValue value;
  };
  using NodePtr = std::shared_ptr<const Node>;

  GreenFunctor(GroupPtr g, GreenParams params);

  const GroupPtr& group() const noexcept { return group_; }
  const GreenParams& params() const noexcept { return params_; }

  NodePtr node(const PermGroup& h) const;
  const GreenValue& value(const PermGroup& h) const { return node(h)->value; }

  /// A(X) -> A(Y) along a homomorphism phi: Y -> X given as a function on elements of Y.
  template <class Phi>
  AlgebraMap pullback(const PermGroup& x, const PermGroup& y, Phi&& phi) const;

  /// res^K_H: A(K) -> A(H) for H <= K.
  AlgebraMap res(const PermGroup& k, const PermGroup& h) const;
  /// ind^K_H: A(H) -> A(K).
  AlgebraMap ind(const PermGroup& k, const PermGroup& h) const;
  /// c_g: A(H) -> A(gHg^{-1}), restriction along y |-> g^{-1} y g.
  AlgebraMap conj(const Perm& g, const PermGroup& h) const;

 private:
  AlgebraMap pullback_table(const PermGroup& x, const PermGroup& y, const std::vector<Perm>& images) const;

  GroupPtr group_;
  GreenParams params_;
  mutable OnceCache<std::vector<Perm>, Node> nodes_;
};

/// Builds the node of a group on its own, without memoization.
GreenFunctor::Node build_node(GroupPtr h, const GreenParams& params);

/// A(X) -> A(Y) along phi: Y -> X, with images[i] = phi(Y.elements()[i]).
AlgebraMap pullback_nodes(const GreenFunctor::Node& x, const GreenFunctor::Node& y, const std::vector<Perm>& images,
                          const GreenParams& params);

template <class Phi>
AlgebraMap GreenFunctor::pullback(const PermGroup& x, const PermGroup& y, Phi&& phi) const {
  std::vector<Perm> images;
  images.reserve(y.order());
  for (const auto& e : y.elements()) images.push_back(phi(e));
  return pullback_table(x, y, images);
}

/// The stable elements of A(P) for the Sylow subgroup of G, with the colimit dimension.
StableResult stable_elements(GroupPtr g, const GreenParams& params);

/// Common fixed subalgebra of algebra automorphisms of `value`.
SubalgebraPtr invariants(const GreenValue& value, const std::vector<AlgebraMap>& action);

/// Automorphisms c_g of A(P) for g ranging over generators of N_G(P), P the Sylow subgroup.
std::vector<AlgebraMap> normalizer_action(const GreenFunctor& f);

/// A(G) for a general group: F_p when p does not divide |G|, else the stable subalgebra.
GreenValue value_general(GroupPtr g, const GreenParams& params);

/// (beta^*)^{-1}: A(G) -> A(H) for an epimorphism beta: G -> H whose kernel has order prime to p.
AlgebraMap inflation_inverse(const PermHom& beta, const GreenParams& params);

}  // namespace greenkernel
