#include "greenkernel/borel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace greenkernel {

FpMatrix LocalAlgebra::mul_matrix(std::span<const Residue> a) const {
  const std::size_t d = dim();
  FpMatrix m(field(), d, d);
  for (std::size_t j = 0; j < d; ++j) m.set_column(j, mul(a, basis_vector(j)));
  return m;
}

Vec LocalAlgebra::power(std::span<const Residue> a, std::uint64_t e) const {
  Vec result = one();
  Vec base(a.begin(), a.end());
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    e >>= 1;
    if (e != 0) base = mul(base, base);
  }
  return result;
}

namespace {

constexpr std::size_t kTableLimit = 1024;

bool is_power_of(std::uint64_t q, std::uint32_t p) {
  if (q < p) return false;
  while (q % p == 0) q /= p;
  return q == 1;
}

}  // namespace

BorelAlgebra::BorelAlgebra(PrimeField field, std::vector<std::uint32_t> profile)
    : LocalAlgebra(field), profile_(std::move(profile)), layout_(make_layout(profile_)) {
  for (auto q : profile_) {
    if (!is_power_of(q, field.p())) {
      throw InputError("profile entry " + std::to_string(q) + " is not a positive power of " +
                       std::to_string(field.p()));
    }
  }
  const std::uint64_t space = layout_->space();
  if (space > (1ull << 24)) throw BudgetError("algebra dimension too large", space);
  monomials_.reserve(space);
  for (std::uint64_t i = 0; i < space; ++i) monomials_.push_back(layout_->decode(layout_->code_of_dense(i)));
  auto degree = [](const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); };
  std::stable_sort(monomials_.begin(), monomials_.end(), [&](const Exponents& a, const Exponents& b) {
    const auto da = degree(a);
    const auto db = degree(b);
    if (da != db) return da < db;
    return a > b;
  });
  codes_.resize(space);
  index_by_dense_.resize(space);
  for (std::size_t i = 0; i < space; ++i) {
    codes_[i] = layout_->encode(monomials_[i]);
    index_by_dense_[layout_->dense_index(codes_[i])] = static_cast<std::uint32_t>(i);
  }
  if (space <= kTableLimit) {
    table_.assign(space * space, -1);
    for (std::size_t i = 0; i < space; ++i) {
      for (std::size_t j = 0; j < space; ++j) {
        const std::uint64_t c = codes_[i] + codes_[j];
        if (layout_->within_caps(c)) table_[i * space + j] = static_cast<std::int32_t>(index_by_dense_[layout_->dense_index(c)]);
      }
    }
  }
}

Vec BorelAlgebra::mul(std::span<const Residue> a, std::span<const Residue> b) const {
  const std::size_t d = dim();
  if (a.size() != d || b.size() != d) throw InputError("element has wrong dimension");
  const PrimeField& f = field();
  std::vector<std::uint64_t> acc(d, 0);
  std::vector<std::size_t> nzb;
  for (std::size_t j = 0; j < d; ++j) {
    if (b[j] != 0) nzb.push_back(j);
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    const std::uint64_t ai = a[i];
    for (std::size_t j : nzb) {
      std::int64_t k;
      if (!table_.empty()) {
        k = table_[i * d + j];
      } else {
        const std::uint64_t c = codes_[i] + codes_[j];
        k = layout_->within_caps(c) ? static_cast<std::int64_t>(index_by_dense_[layout_->dense_index(c)]) : -1;
      }
      if (k >= 0) acc[static_cast<std::size_t>(k)] += ai * b[j];
    }
    if (++count % 4096 == 0) {
      for (auto& x : acc) x %= f.p();
    }
  }
  Vec out(d);
  for (std::size_t k = 0; k < d; ++k) out[k] = static_cast<Residue>(acc[k] % f.p());
  return out;
}

std::vector<Vec> BorelAlgebra::radical_generators() const {
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < num_generators(); ++i) gens.push_back(generator(i));
  return gens;
}

Vec BorelAlgebra::generator(std::size_t i) const {
  if (i >= num_generators()) throw InputError("generator index out of range");
  Exponents e(num_generators(), 0);
  e[i] = 1;
  return unit_vector(dim(), index_of(e));
}

std::size_t BorelAlgebra::index_of(std::span<const std::uint32_t> exps) const {
  if (exps.size() != num_generators()) throw InputError("exponent vector has wrong length");
  for (std::size_t v = 0; v < exps.size(); ++v) {
    if (exps[v] >= profile_[v]) throw InputError("monomial outside the algebra's caps");
  }
  return index_by_dense_[layout_->dense_index(layout_->encode(exps))];
}

Vec BorelAlgebra::from_poly(const FpPoly& f) const {
  if (!(*f.layout() == *layout_)) throw InputError("polynomial caps do not match the algebra");
  Vec out(dim(), 0);
  for (const auto& [code, c] : f.terms()) out[index_by_dense_[layout_->dense_index(code)]] = c;
  return out;
}

FpPoly BorelAlgebra::to_poly(std::span<const Residue> a) const {
  if (a.size() != dim()) throw InputError("element has wrong dimension");
  std::vector<FpPoly::Term> raw;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0) raw.emplace_back(codes_[i], a[i]);
  }
  return FpPoly::from_unsorted(field(), layout_, std::move(raw));
}

std::string BorelAlgebra::element_string(std::span<const Residue> a) const {
  return to_poly(a).to_string();
}

BorelPtr make_algebra(std::uint32_t p, std::vector<std::uint32_t> profile) {
  return std::make_shared<const BorelAlgebra>(PrimeField(p), std::move(profile));
}

Subalgebra::Subalgebra(AlgebraPtr ambient, std::vector<Vec> basis)
    : LocalAlgebra(ambient->field()), ambient_(std::move(ambient)), basis_(std::move(basis)) {
  const std::size_t d = ambient_->dim();
  if (span_basis(field(), d, basis_) != basis_) {
    throw InputError("subalgebra basis must be in reduced echelon form");
  }
  if (basis_.empty() || basis_[0] != ambient_->one()) {
    throw InputError("subalgebra basis must start with the unit");
  }
  for (const auto& v : basis_) {
    pivots_.push_back(static_cast<std::size_t>(
        std::find_if(v.begin(), v.end(), [](Residue x) { return x != 0; }) - v.begin()));
  }
  for (std::size_t i = 1; i < basis_.size(); ++i) {
    for (std::size_t j = i; j < basis_.size(); ++j) {
      if (!contains(ambient_->mul(basis_[i], basis_[j]))) {
        throw InputError("subspace is not closed under multiplication");
      }
    }
  }
}

Vec Subalgebra::embed(std::span<const Residue> coords) const {
  if (coords.size() != dim()) throw InputError("element has wrong dimension");
  Vec out(ambient_->dim(), 0);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = field().add(out[k], field().mul(coords[i], basis_[i][k]));
    }
  }
  return out;
}

Vec Subalgebra::coordinates(std::span<const Residue> ambient_vec) const {
  Vec c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = ambient_vec[pivots_[i]];
  if (embed(c) != Vec(ambient_vec.begin(), ambient_vec.end())) {
    throw InputError("vector does not lie in the subalgebra");
  }
  return c;
}

bool Subalgebra::contains(std::span<const Residue> ambient_vec) const {
  Vec c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = ambient_vec[pivots_[i]];
  return embed(c) == Vec(ambient_vec.begin(), ambient_vec.end());
}

Vec Subalgebra::mul(std::span<const Residue> a, std::span<const Residue> b) const {
  return coordinates(ambient_->mul(embed(a), embed(b)));
}

std::vector<Vec> Subalgebra::radical_generators() const {
  std::vector<Vec> gens;
  for (std::size_t i = 1; i < dim(); ++i) gens.push_back(basis_vector(i));
  return gens;
}

std::string Subalgebra::element_string(std::span<const Residue> a) const {
  return ambient_->element_string(embed(a));
}

SubalgebraPtr subalgebra_close(AlgebraPtr ambient, std::span<const Vec> vectors) {
  const PrimeField& f = ambient->field();
  const std::size_t d = ambient->dim();
  std::vector<Vec> gens{ambient->one()};
  gens.insert(gens.end(), vectors.begin(), vectors.end());
  std::vector<Vec> basis = span_basis(f, d, gens);
  while (true) {
    std::vector<Vec> grown = basis;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i; j < basis.size(); ++j) grown.push_back(ambient->mul(basis[i], basis[j]));
    }
    grown = span_basis(f, d, grown);
    if (grown.size() == basis.size()) break;
    basis = std::move(grown);
  }
  return std::make_shared<const Subalgebra>(std::move(ambient), std::move(basis));
}

std::vector<Vec> socle_basis(const LocalAlgebra& a) {
  const auto gens = a.radical_generators();
  if (gens.empty()) return {a.one()};
  FpMatrix stacked = a.mul_matrix(gens[0]);
  for (std::size_t i = 1; i < gens.size(); ++i) stacked = stacked.stacked(a.mul_matrix(gens[i]));
  return span_basis(a.field(), a.dim(), mat_kernel(stacked));
}

bool is_unit(const LocalAlgebra& a, std::span<const Residue> u) { return a.aug(u) != 0; }

Vec unit_inverse(const LocalAlgebra& a, std::span<const Residue> u) {
  const PrimeField& f = a.field();
  if (!is_unit(a, u)) throw InputError("element is not a unit");
  // u = c(1 - n) with n nilpotent, so u^{-1} = c^{-1}(1 + n + n^2 + ...).
  const Residue cinv = f.inv(a.aug(u));
  const Vec scaled = vec_scale(f, cinv, u);
  const Vec n = vec_sub(f, a.one(), scaled);
  Vec sum = a.one();
  Vec term = a.one();
  for (std::size_t k = 0; k < a.dim(); ++k) {
    term = a.mul(term, n);
    if (vec_is_zero(term)) break;
    sum = vec_add(f, sum, term);
  }
  Vec inv = vec_scale(f, cinv, sum);
  if (a.mul(inv, u) != a.one()) throw InvariantError("unit inverse check failed");
  return inv;
}

std::uint64_t nilpotency_index(const LocalAlgebra& a, std::span<const Residue> x) {
  Vec power(x.begin(), x.end());
  for (std::uint64_t e = 1; e <= a.dim(); ++e) {
    if (vec_is_zero(power)) return e;
    power = a.mul(power, x);
  }
  return 0;
}

AlgebraMap::AlgebraMap(AlgebraPtr source, AlgebraPtr target, FpMatrix matrix, bool is_algebra_map,
                       bool is_module_map)
    : source_(std::move(source)),
      target_(std::move(target)),
      matrix_(std::move(matrix)),
      algebra_map_(is_algebra_map),
      module_map_(is_module_map) {
  if (matrix_.rows() != target_->dim() || matrix_.cols() != source_->dim()) {
    throw InputError("map matrix shape does not match source and target");
  }
}

AlgebraMap AlgebraMap::after(const AlgebraMap& first) const {
  if (first.target_->dim() != source_->dim()) {
    throw InputError("maps are not composable");
  }
  return AlgebraMap(first.source_, target_, matrix_ * first.matrix_,
                    algebra_map_ && first.algebra_map_, false);
}

AlgebraMap algebra_map(BorelPtr source, AlgebraPtr target, std::span<const Vec> generator_images) {
  if (generator_images.size() != source->num_generators()) {
    throw InputError("need one image per generator");
  }
  for (std::size_t i = 0; i < generator_images.size(); ++i) {
    if (generator_images[i].size() != target->dim()) throw InputError("image has wrong dimension");
    if (!vec_is_zero(target->power(generator_images[i], source->profile()[i]))) {
      throw InputError("not an algebra map: generator " + std::to_string(i) +
                       " image violates its relation");
    }
  }
  // Powers of each image, then products over monomials.
  std::vector<std::vector<Vec>> powers(generator_images.size());
  for (std::size_t i = 0; i < generator_images.size(); ++i) {
    powers[i].push_back(target->one());
    for (std::uint32_t e = 1; e < source->profile()[i]; ++e) {
      powers[i].push_back(target->mul(powers[i].back(), generator_images[i]));
    }
  }
  FpMatrix m(target->field(), target->dim(), source->dim());
  for (std::size_t k = 0; k < source->dim(); ++k) {
    const Exponents& e = source->monomial(k);
    Vec img = target->one();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) img = target->mul(img, powers[i][e[i]]);
    }
    m.set_column(k, img);
  }
  return AlgebraMap(std::move(source), std::move(target), std::move(m), true, false);
}

AlgebraMap identity_map(AlgebraPtr a) {
  const std::size_t d = a->dim();
  FpMatrix id = FpMatrix::identity(a->field(), d);
  return AlgebraMap(a, a, std::move(id), true, true);
}

bool verify_algebra_map(const AlgebraMap& f) {
  const auto& s = *f.source();
  const auto& t = *f.target();
  if (f.apply(s.one()) != t.one()) return false;
  std::vector<Vec> images;
  for (std::size_t i = 0; i < s.dim(); ++i) images.push_back(f.matrix().column(i));
  for (std::size_t i = 0; i < s.dim(); ++i) {
    for (std::size_t j = i; j < s.dim(); ++j) {
      if (f.apply(s.mul(s.basis_vector(i), s.basis_vector(j))) != t.mul(images[i], images[j])) {
        return false;
      }
    }
  }
  return true;
}

TensorProduct tensor(const BorelPtr& a, const BorelPtr& b) {
  if (!(a->field() == b->field())) throw InputError("tensor factors have different characteristic");
  std::vector<std::uint32_t> profile = a->profile();
  profile.insert(profile.end(), b->profile().begin(), b->profile().end());
  auto ab = std::make_shared<const BorelAlgebra>(a->field(), profile);
  std::vector<Vec> left_images;
  std::vector<Vec> right_images;
  for (std::size_t i = 0; i < a->num_generators(); ++i) left_images.push_back(ab->generator(i));
  for (std::size_t i = 0; i < b->num_generators(); ++i) {
    right_images.push_back(ab->generator(a->num_generators() + i));
  }
  AlgebraMap left = algebra_map(a, ab, left_images);
  AlgebraMap right = algebra_map(b, ab, right_images);
  return TensorProduct{ab, std::move(left), std::move(right)};
}

BorelPtr tensor_all(std::uint32_t p, std::span<const BorelPtr> factors) {
  std::vector<std::uint32_t> profile;
  for (const auto& f : factors) {
    if (f->field().p() != p) throw InputError("tensor factors have different characteristic");
    profile.insert(profile.end(), f->profile().begin(), f->profile().end());
  }
  return make_algebra(p, std::move(profile));
}

}  // namespace greenkernel
