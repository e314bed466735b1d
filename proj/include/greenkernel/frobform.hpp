#pragma once

#include <optional>
#include <span>

#include "greenkernel/borel.hpp"

namespace greenkernel {

/// A covector lambda on a local algebra whose pairing <a|b> = lambda(ab) is nondegenerate.
struct FrobeniusForm {
  AlgebraPtr algebra;
  Vec covector;
  /// P[i][j] = lambda(e_i e_j).
  FpMatrix pairing;
  /// Column j is v_j with <e_i | v_j> = delta_ij.
  FpMatrix dual_basis;

  Residue operator()(std::span<const Residue> a) const { return dot(algebra->field(), covector, a); }
};

struct FormCheck {
  bool frobenius = false;
  std::size_t pairing_rank = 0;
  /// Present when frobenius is true.
  std::optional<FrobeniusForm> form;
};

/// Pairing matrix of an arbitrary covector.
FpMatrix pairing_matrix(const LocalAlgebra& a, std::span<const Residue> covector);

/// Nondegeneracy of the pairing. When dim soc = 1 this is cross-checked against
/// "covector nonzero on the socle" and a disagreement raises InvariantError.
FormCheck is_frobenius_form(const AlgebraPtr& a, std::span<const Residue> covector);

/// Throws InputError unless the covector is a Frobenius form.
FrobeniusForm make_form(const AlgebraPtr& a, std::span<const Residue> covector);

/// The functional e_k^* / z_k, where z is the reduced echelon socle generator and k
/// its last nonzero coordinate. For a Borel algebra this is the top-monomial coefficient.
FrobeniusForm canonical_form(const AlgebraPtr& a);

/// lambda'(a) = lambda(a w) with w = sum_j t_j v_j, where v is the basis dual to u under
/// lambda; then lambda'(u_i) = t_i. Requires u_0 in the socle and t_0 != 0.
FrobeniusForm modify_form(const FrobeniusForm& lambda, std::span<const Vec> u,
                          std::span<const Residue> t);

/// The unit u with theta(a) = lambda(a u^{-1}) for every a.
Vec form_unit(const FrobeniusForm& lambda, const FrobeniusForm& theta);

/// The A-module map alpha: B -> A with lambda_A(a alpha(b)) = lambda_B(f(a) b).
AlgebraMap gysin(const AlgebraMap& f, const FrobeniusForm& lambda_a, const FrobeniusForm& lambda_b);

/// alpha(f(g) b) = g alpha(b) for generators g of A and all basis b of B.
bool is_module_map(const AlgebraMap& f, const AlgebraMap& alpha);

/// An A-module map B -> A sending the socle generator of B to `socle_image`.
AlgebraMap extend_socle_map(const AlgebraMap& f, std::span<const Residue> socle_image);

/// (f(a)|b)_B = (a|alpha(b))_A on all basis pairs, where (x|y)_A = lambda_A(xy)
/// and (x|y)_B = lambda_A(alpha(xy)).
bool check_reciprocity(const AlgebraMap& f, const AlgebraMap& alpha, const FrobeniusForm& lambda_a);

/// The covector lambda_A o alpha on the source of alpha.
Vec pullback_covector(const AlgebraMap& alpha, const FrobeniusForm& lambda_a);

/// Some b with b * theta(z_A) spanning soc B, found by search over basis elements and
/// then all elements when the dimension is small; nullopt if none exists.
std::optional<Vec> socle_transport(const AlgebraMap& theta);

}  // namespace greenkernel
