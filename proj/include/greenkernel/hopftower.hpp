#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "greenkernel/borel.hpp"
#include "greenkernel/fgl.hpp"

namespace greenkernel {

/// Hopf structure on a Borel algebra, stored on generators only.
///
/// coproduct[i] is psi(x_i) as a polynomial in 2l variables (left factor first);
/// antipode[i] is chi(x_i) in l variables. The counit is the augmentation.
struct HopfStructure {
  BorelPtr algebra;
  std::vector<FpPoly> coproduct;
  std::vector<FpPoly> antipode;
};

struct HopfReport {
  /// Images of generators satisfy the defining relations, so psi and chi extend to algebra maps.
  bool well_defined = false;
  bool coassociative = false;
  bool counital = false;
  bool antipode = false;
  bool cocommutative = false;
  bool all() const { return well_defined && coassociative && counital && antipode && cocommutative; }
};

HopfReport hopf_check(const HopfStructure& h);

/// The trivial Hopf algebra F_p.
HopfStructure trivial_hopf(std::uint32_t p);

/// H_r = F_p[x]/(x^{q^r}) with psi(x) = F(x(x)1, 1(x)x) and chi(x) = iota(x).
struct HondaLevel {
  HondaParams params;
  std::uint32_t r = 1;
  std::uint32_t cap = 1;  // q^r
  HopfStructure hopf;
  const BorelPtr& algebra() const noexcept { return hopf.algebra; }
};

using HondaLevelPtr = std::shared_ptr<const HondaLevel>;

/// Level r of the height-n tower at p, memoized per (p, n, r). Level 0 is F_p.
HondaLevelPtr honda_level(std::uint32_t p, std::uint32_t n, std::uint32_t r);

/// The law truncated for level r, shared with honda_level.
FglPtr level_fgl(std::uint32_t p, std::uint32_t n, std::uint32_t r);

/// x |-> [m](x) on H_a.
AlgebraMap multiplication_map(std::uint32_t p, std::uint32_t n, std::uint32_t a, std::int64_t m);

/// H_a -> H_b with x_a |-> x_b, for a >= b.
AlgebraMap tower_surjection(std::uint32_t p, std::uint32_t n, std::uint32_t a, std::uint32_t b);

/// H_s -> H_{r+s} with x_s |-> x_{r+s}^{q^r}.
AlgebraMap tower_injection(std::uint32_t p, std::uint32_t n, std::uint32_t s, std::uint32_t r);

struct TowerMaps {
  AlgebraMap surj;  // H_{r+s} -> H_r
  AlgebraMap inj;   // H_s -> H_{r+s}
};

TowerMaps tower_maps(std::uint32_t p, std::uint32_t n, std::uint32_t r, std::uint32_t s);

/// psi'(g(x)) = (g (x) g) psi(x) and chi'(g(x)) = g(chi(x)) for each generator x.
/// `g` must be an algebra map between the algebras of the two structures.
bool is_hopf_map(const HopfStructure& source, const HopfStructure& target, const AlgebraMap& g);

struct PdivReport {
  std::size_t kernel_dim = 0;
  std::size_t ideal_dim = 0;
  /// ker(H_{r+s} -> H_r) equals the ideal generated by [p^r](x_{r+s}).
  bool kernel_is_ideal = false;
  /// [p^r](x_r) = 0 in H_r.
  bool p_power_vanishes = false;
  bool surj_hopf = false;
  bool inj_hopf = false;
  bool surj_onto = false;
  bool inj_into = false;
  /// Named matrix identities from the compatibility diagrams.
  std::vector<std::pair<std::string, bool>> squares;
  bool all() const;
};

/// Requires q^{r+s} <= budget. The compatibility diagrams also build level r+s+1.
PdivReport pdiv_check(std::uint32_t p, std::uint32_t n, std::uint32_t r, std::uint32_t s,
                      std::size_t budget);

/// {z : x z = aug(x) z for every basis element x}.
std::vector<Vec> integrals(const LocalAlgebra& h);

}  // namespace greenkernel
