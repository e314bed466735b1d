#include "greenkernel/frobform.hpp"

namespace greenkernel {

FpMatrix pairing_matrix(const LocalAlgebra& a, std::span<const Residue> covector) {
  const std::size_t d = a.dim();
  if (covector.size() != d) throw InputError("covector has wrong dimension");
  FpMatrix p(a.field(), d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const Vec ei = a.basis_vector(i);
    for (std::size_t j = i; j < d; ++j) {
      const Residue v = dot(a.field(), covector, a.mul(ei, a.basis_vector(j)));
      p(i, j) = v;
      p(j, i) = v;
    }
  }
  return p;
}

FormCheck is_frobenius_form(const AlgebraPtr& a, std::span<const Residue> covector) {
  FormCheck out;
  FpMatrix p = pairing_matrix(*a, covector);
  out.pairing_rank = p.rank();
  out.frobenius = out.pairing_rank == a->dim();
  const auto soc = socle_basis(*a);
  if (soc.size() == 1) {
    const bool nonzero_on_socle = dot(a->field(), covector, soc[0]) != 0;
    if (nonzero_on_socle != out.frobenius) {
      throw InvariantError("pairing rank disagrees with the socle criterion");
    }
  }
  if (out.frobenius) {
    auto inv = p.inverse();
    if (!inv) throw InvariantError("full-rank pairing has no inverse");
    out.form = FrobeniusForm{a, Vec(covector.begin(), covector.end()), std::move(p), std::move(*inv)};
  }
  return out;
}

FrobeniusForm make_form(const AlgebraPtr& a, std::span<const Residue> covector) {
  auto check = is_frobenius_form(a, covector);
  if (!check.frobenius) throw InputError("covector is not a Frobenius form");
  return std::move(*check.form);
}

FrobeniusForm canonical_form(const AlgebraPtr& a) {
  const auto soc = socle_basis(*a);
  if (soc.size() != 1) {
    throw InputError("not Gorenstein: socle has dimension " + std::to_string(soc.size()));
  }
  const Vec& z = soc[0];
  std::size_t k = z.size();
  while (k > 0 && z[k - 1] == 0) --k;
  Vec covector(a->dim(), 0);
  covector[k - 1] = a->field().inv(z[k - 1]);
  return make_form(a, covector);
}

FrobeniusForm modify_form(const FrobeniusForm& lambda, std::span<const Vec> u,
                          std::span<const Residue> t) {
  const LocalAlgebra& a = *lambda.algebra;
  const PrimeField& f = a.field();
  const std::size_t d = a.dim();
  if (u.size() != d || t.size() != d) throw InputError("modify_form needs a full basis and targets");
  if (t[0] % f.p() == 0) throw InputError("modify_form requires t_0 != 0");
  const auto soc = socle_basis(a);
  if (!in_span(f, d, soc, u[0])) throw InputError("u_0 must lie in the socle");
  const FpMatrix umat = FpMatrix::from_columns(f, d, u);
  if (umat.rank() != d) throw InputError("u is not a basis");
  // Dual basis of u: V with U^T P V = I, so V = (U^T P)^{-1}.
  auto vmat = (umat.transposed() * lambda.pairing).inverse();
  if (!vmat) throw InvariantError("pairing is degenerate");
  Vec w = vmat->apply(Vec(t.begin(), t.end()));
  // lambda'(a) = lambda(a w) = (P w) . a
  Vec covector = lambda.pairing.apply(w);
  FrobeniusForm out = make_form(lambda.algebra, covector);
  for (std::size_t i = 0; i < d; ++i) {
    if (out(u[i]) != t[i] % f.p()) throw InvariantError("modified form misses a target value");
  }
  return out;
}

Vec form_unit(const FrobeniusForm& lambda, const FrobeniusForm& theta) {
  const LocalAlgebra& a = *lambda.algebra;
  if (theta.algebra->dim() != a.dim()) throw InputError("forms live on different algebras");
  // w = u^{-1} solves lambda(a w) = theta(a), i.e. P w = theta.
  const Vec w = lambda.dual_basis.apply(theta.covector);
  if (!is_unit(a, w)) throw InputError("theta is not a Frobenius form");
  const Vec u = unit_inverse(a, w);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Vec ei = a.basis_vector(i);
    if (theta(ei) != lambda(a.mul(ei, w))) throw InvariantError("form_unit identity failed");
  }
  return u;
}

AlgebraMap gysin(const AlgebraMap& f, const FrobeniusForm& lambda_a, const FrobeniusForm& lambda_b) {
  if (lambda_a.algebra->dim() != f.source()->dim() || lambda_b.algebra->dim() != f.target()->dim()) {
    throw InputError("forms do not match the map's source and target");
  }
  // alpha = P_A^{-1} F^T P_B.
  FpMatrix alpha = lambda_a.dual_basis * (f.matrix().transposed() * lambda_b.pairing);
  AlgebraMap out(f.target(), f.source(), std::move(alpha), false, false);
  if (!is_module_map(f, out)) throw InvariantError("Gysin map is not a module map");
  return AlgebraMap(f.target(), f.source(), out.matrix(), false, true);
}

bool is_module_map(const AlgebraMap& f, const AlgebraMap& alpha) {
  const LocalAlgebra& a = *f.source();
  const LocalAlgebra& b = *f.target();
  if (alpha.source()->dim() != b.dim() || alpha.target()->dim() != a.dim()) return false;
  for (const auto& g : a.radical_generators()) {
    const FpMatrix lhs = alpha.matrix() * b.mul_matrix(f.apply(g));
    const FpMatrix rhs = a.mul_matrix(g) * alpha.matrix();
    if (!(lhs == rhs)) return false;
  }
  return true;
}

AlgebraMap extend_socle_map(const AlgebraMap& f, std::span<const Residue> socle_image) {
  const LocalAlgebra& a = *f.source();
  const LocalAlgebra& b = *f.target();
  const PrimeField& fld = a.field();
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  if (da * db > 4096) throw BudgetError("extend_socle_map system too large", da * db);
  const auto soc_b = socle_basis(b);
  const auto soc_a = socle_basis(a);
  if (soc_a.size() != 1 || soc_b.size() != 1) throw InputError("extend_socle_map needs simple socles");
  if (socle_image.size() != da || !in_span(fld, da, soc_a, socle_image) || vec_is_zero(socle_image)) {
    throw InputError("socle image must be a nonzero socle element");
  }
  // Unknown X (da x db), entry (i, j) at i*db + j.
  std::vector<Vec> rows;
  Vec rhs;
  for (const auto& g : a.radical_generators()) {
    const FpMatrix n = b.mul_matrix(f.apply(g));
    const FpMatrix gm = a.mul_matrix(g);
    // (X N - G X)[i][j] = 0.
    for (std::size_t i = 0; i < da; ++i) {
      for (std::size_t j = 0; j < db; ++j) {
        Vec row(da * db, 0);
        for (std::size_t k = 0; k < db; ++k) row[i * db + k] = fld.add(row[i * db + k], n(k, j));
        for (std::size_t l = 0; l < da; ++l) row[l * db + j] = fld.sub(row[l * db + j], gm(i, l));
        if (!vec_is_zero(row)) {
          rows.push_back(std::move(row));
          rhs.push_back(0);
        }
      }
    }
  }
  // X z_B = socle_image.
  for (std::size_t i = 0; i < da; ++i) {
    Vec row(da * db, 0);
    for (std::size_t k = 0; k < db; ++k) row[i * db + k] = soc_b[0][k];
    rows.push_back(std::move(row));
    rhs.push_back(socle_image[i]);
  }
  const FpMatrix sys = FpMatrix::from_rows(fld, da * db, rows);
  auto x = solve(sys, rhs);
  if (!x) throw InvariantError("no module extension exists; self-injectivity violated");
  FpMatrix m(fld, da, db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) m(i, j) = (*x)[i * db + j];
  return AlgebraMap(f.target(), f.source(), std::move(m), false, true);
}

Vec pullback_covector(const AlgebraMap& alpha, const FrobeniusForm& lambda_a) {
  return alpha.matrix().transposed().apply(lambda_a.covector);
}

bool check_reciprocity(const AlgebraMap& f, const AlgebraMap& alpha, const FrobeniusForm& lambda_a) {
  const LocalAlgebra& b = *f.target();
  const Vec c = pullback_covector(alpha, lambda_a);
  // (f(e_i) | e_j)_B = (F^T P_c)[i][j]; (e_i | alpha(e_j))_A = (P_A alpha)[i][j].
  const FpMatrix lhs = f.matrix().transposed() * pairing_matrix(b, c);
  const FpMatrix rhs = lambda_a.pairing * alpha.matrix();
  return lhs == rhs;
}

std::optional<Vec> socle_transport(const AlgebraMap& theta) {
  const LocalAlgebra& a = *theta.source();
  const LocalAlgebra& b = *theta.target();
  const auto soc_a = socle_basis(a);
  const auto soc_b = socle_basis(b);
  if (soc_a.size() != 1 || soc_b.size() != 1) throw InputError("socle_transport needs simple socles");
  const Vec image = theta.apply(soc_a[0]);
  auto works = [&](const Vec& cand) {
    const Vec prod = b.mul(cand, image);
    return !vec_is_zero(prod) && in_span(b.field(), b.dim(), soc_b, prod);
  };
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (works(b.basis_vector(i))) return b.basis_vector(i);
  }
  double space = 1;
  for (std::size_t i = 0; i < b.dim(); ++i) space *= b.field().p();
  if (space > 65536) return std::nullopt;
  Vec cand(b.dim(), 0);
  while (true) {
    std::size_t i = 0;
    while (i < cand.size() && ++cand[i] == b.field().p()) cand[i++] = 0;
    if (i == cand.size()) break;
    if (works(cand)) return cand;
  }
  return std::nullopt;
}

}  // namespace greenkernel
