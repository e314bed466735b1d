#pragma once

#include <memory>
#include <string>
#include <vector>

#include "greenkernel/matrix.hpp"
#include "greenkernel/truncpoly.hpp"

namespace greenkernel {

/// A finite-dimensional commutative augmented local F_p-algebra given in a fixed basis.
/// Basis element 0 is the unit and the augmentation ideal is spanned by the others.
class LocalAlgebra {
 public:
  explicit LocalAlgebra(PrimeField field) : field_(field) {}
  virtual ~LocalAlgebra() = default;

  const PrimeField& field() const noexcept { return field_; }
  virtual std::size_t dim() const = 0;
  virtual Vec mul(std::span<const Residue> a, std::span<const Residue> b) const = 0;
  /// Elements generating the maximal ideal as an ideal.
  virtual std::vector<Vec> radical_generators() const = 0;
  virtual std::string element_string(std::span<const Residue> a) const = 0;

  Vec one() const { return unit_vector(dim(), 0); }
  Residue aug(std::span<const Residue> a) const { return a[0]; }
  Vec basis_vector(std::size_t i) const { return unit_vector(dim(), i); }
  /// Matrix of b -> a*b.
  FpMatrix mul_matrix(std::span<const Residue> a) const;
  Vec power(std::span<const Residue> a, std::uint64_t e) const;

 private:
  PrimeField field_;
};

using AlgebraPtr = std::shared_ptr<const LocalAlgebra>;

/// k[x_1..x_l]/(x_i^{q_i}) with each q_i a power of p.
///
/// The basis is every monomial within the caps, ordered by total degree and
/// lexicographically descending inside a degree, so 1 comes first and the top
/// monomial x_1^{q_1-1}...x_l^{q_l-1} last.
class BorelAlgebra : public LocalAlgebra {
 public:
  BorelAlgebra(PrimeField field, std::vector<std::uint32_t> profile);

  std::size_t dim() const override { return monomials_.size(); }
  const std::vector<std::uint32_t>& profile() const noexcept { return profile_; }
  std::size_t num_generators() const noexcept { return profile_.size(); }
  const LayoutPtr& layout() const noexcept { return layout_; }

  Vec mul(std::span<const Residue> a, std::span<const Residue> b) const override;
  std::vector<Vec> radical_generators() const override;
  std::string element_string(std::span<const Residue> a) const override;

  Vec generator(std::size_t i) const;
  const Exponents& monomial(std::size_t i) const { return monomials_[i]; }
  /// Basis index of a monomial within caps.
  std::size_t index_of(std::span<const std::uint32_t> exps) const;
  std::size_t top_index() const noexcept { return dim() - 1; }

  Vec from_poly(const FpPoly& f) const;
  FpPoly to_poly(std::span<const Residue> a) const;

 private:
  std::vector<std::uint32_t> profile_;
  LayoutPtr layout_;
  std::vector<Exponents> monomials_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint32_t> index_by_dense_;
  /// Product index table (or -1 for zero), materialized for small algebras.
  std::vector<std::int32_t> table_;
};

using BorelPtr = std::shared_ptr<const BorelAlgebra>;

/// Throws InputError unless every q_i is a positive power of p.
BorelPtr make_algebra(std::uint32_t p, std::vector<std::uint32_t> profile);

/// A unital subalgebra of an ambient local algebra, stored as a reduced echelon
/// basis of ambient vectors. Coordinates are taken at the pivot columns; basis
/// vector 0 is the unit.
class Subalgebra : public LocalAlgebra {
 public:
  /// `basis` must already be the reduced echelon basis of a multiplicatively
  /// closed subspace containing 1; checked.
  Subalgebra(AlgebraPtr ambient, std::vector<Vec> basis);

  std::size_t dim() const override { return basis_.size(); }
  const AlgebraPtr& ambient() const noexcept { return ambient_; }
  const std::vector<Vec>& basis() const noexcept { return basis_; }

  Vec mul(std::span<const Residue> a, std::span<const Residue> b) const override;
  std::vector<Vec> radical_generators() const override;
  std::string element_string(std::span<const Residue> a) const override;

  Vec embed(std::span<const Residue> coords) const;
  /// Coordinates of an ambient vector; throws InputError when it is not in the subalgebra.
  Vec coordinates(std::span<const Residue> ambient_vec) const;
  bool contains(std::span<const Residue> ambient_vec) const;

 private:
  AlgebraPtr ambient_;
  std::vector<Vec> basis_;
  std::vector<std::size_t> pivots_;
};

using SubalgebraPtr = std::shared_ptr<const Subalgebra>;

/// Smallest unital subalgebra containing the given ambient vectors.
SubalgebraPtr subalgebra_close(AlgebraPtr ambient, std::span<const Vec> vectors);

/// Annihilator of the maximal ideal.
std::vector<Vec> socle_basis(const LocalAlgebra& a);

bool is_unit(const LocalAlgebra& a, std::span<const Residue> u);
/// Inverse of a unit via the geometric series in its nilpotent part.
Vec unit_inverse(const LocalAlgebra& a, std::span<const Residue> u);
/// Smallest e with a^e = 0, or 0 if a is not nilpotent.
std::uint64_t nilpotency_index(const LocalAlgebra& a, std::span<const Residue> x);

/// Linear map between local algebras; matrix columns are images of source basis vectors.
class AlgebraMap {
 public:
  AlgebraMap(AlgebraPtr source, AlgebraPtr target, FpMatrix matrix, bool is_algebra_map,
             bool is_module_map);

  const AlgebraPtr& source() const noexcept { return source_; }
  const AlgebraPtr& target() const noexcept { return target_; }
  const FpMatrix& matrix() const noexcept { return matrix_; }
  bool is_algebra_map() const noexcept { return algebra_map_; }
  bool is_module_map() const noexcept { return module_map_; }

  Vec apply(std::span<const Residue> v) const { return matrix_.apply(v); }
  /// this after `first`: source of `first` to target of this.
  AlgebraMap after(const AlgebraMap& first) const;

 private:
  AlgebraPtr source_;
  AlgebraPtr target_;
  FpMatrix matrix_;
  bool algebra_map_;
  bool module_map_;
};

/// Algebra map determined by the images of the generators; checks image_i^{q_i} = 0.
AlgebraMap algebra_map(BorelPtr source, AlgebraPtr target, std::span<const Vec> generator_images);

AlgebraMap identity_map(AlgebraPtr a);

/// Exhaustive check that f(1) = 1 and f(ab) = f(a)f(b) on basis pairs.
bool verify_algebra_map(const AlgebraMap& f);

/// A (x) B together with the algebra maps a -> a(x)1 and b -> 1(x)b.
struct TensorProduct {
  BorelPtr algebra;
  AlgebraMap left;
  AlgebraMap right;
};

TensorProduct tensor(const BorelPtr& a, const BorelPtr& b);

/// Iterated tensor product; the empty product is F_p.
BorelPtr tensor_all(std::uint32_t p, std::span<const BorelPtr> factors);

}  // namespace greenkernel
