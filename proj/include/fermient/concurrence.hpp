#pragma once

#include <Eigen/SVD>

#include <cmath>
#include <optional>
#include <vector>

#include "fermient/fock.hpp"
#include "fermient/rdm.hpp"
#include "fermient/tolerances.hpp"

namespace fermient {

enum class Verdict { Separable, Entangled };

inline const char* to_string(Verdict v) {
  return v == Verdict::Separable ? "separable" : "entangled";
}

/// d_M = binomial(d, min(M, N-M)): the largest possible rank of rho_M.
inline std::uint64_t reduced_dimension(const SystemShape& shape, int m) {
  return binomial(shape.modes, std::min(m, shape.particles - m));
}

template <typename Real = double>
struct BipartitionRecord {
  int subsystem = 0;
  Real purity = 0;
  /// 1 / d_M
  Real lower_bound = 0;
  /// binomial(N, M)^-1
  Real upper_bound = 0;
  Verdict verdict = Verdict::Separable;
};

template <typename Real = double>
struct ConcurrenceReport {
  SystemShape shape;
  std::vector<BipartitionRecord<Real>> bipartitions;
  /// Empty when the shape is degenerate (alpha_N diverges).
  std::optional<Real> alpha;
  /// (N-1) - sum_M binomial(N,M) Tr rho_M^2, before clamping.
  Real bracket = 0;
  Real value = 0;
  bool degenerate = false;

  bool all_separable() const {
    for (const auto& b : bipartitions) {
      if (b.verdict != Verdict::Separable) return false;
    }
    return true;
  }
};

/// A value that may be pinned to zero because the shape admits no entanglement.
template <typename Real = double>
struct FlaggedValue {
  Real value = 0;
  bool degenerate = false;
};

template <typename Real = double>
struct SlaterRankResult {
  int rank = 0;
  /// Canonical-form amplitudes |z_k| of the pairs, nonincreasing; sum of squares is 1.
  std::vector<Real> weights;
};

namespace detail {

/// alpha_N denominator: (N-1) - sum_M binomial(N,M) / d_M.
inline long double alpha_denominator(int n, int d) {
  const SystemShape shape{d, n};
  long double denom = static_cast<long double>(n - 1);
  for (int m = 1; m <= n - 1; ++m) {
    denom -= static_cast<long double>(binomial(n, m)) /
             static_cast<long double>(reduced_dimension(shape, m));
  }
  return denom;
}

/// Verdict for a purity; BoundViolation if it leaves [1/d_M, binomial(N,M)^-1].
template <typename W>
Verdict classify_purity(W purity, const SystemShape& shape, int m, const Tolerances& tol) {
  const W upper = W(1) / static_cast<W>(binomial(shape.particles, m));
  const W lower = W(1) / static_cast<W>(reduced_dimension(shape, m));
  if (purity > upper + static_cast<W>(tol.invariant) ||
      purity < lower - static_cast<W>(tol.invariant)) {
    throw BoundViolation("Tr rho_" + std::to_string(m) + "^2 = " +
                         std::to_string(static_cast<double>(purity)) + " outside [" +
                         std::to_string(static_cast<double>(lower)) + ", " +
                         std::to_string(static_cast<double>(upper)) + "]");
  }
  return std::abs(purity - upper) <= static_cast<W>(tol.separability) ? Verdict::Separable
                                                                        : Verdict::Entangled;
}

}  // namespace detail

/// Normalization alpha_N = 1 / [(N-1) - sum_M binomial(N,M)/d_M].
template <typename Real = double>
Real alpha(int n, int d, double tol = 1e-10) {
  if (n < 2 || n > d) {
    throw ShapeError("alpha_N needs 2 <= N <= d, got N=" + std::to_string(n) +
                     " d=" + std::to_string(d));
  }
  const long double denom = detail::alpha_denominator(n, d);
  if (denom <= static_cast<long double>(tol)) {
    throw DegenerateShapeError("alpha_N diverges for N=" + std::to_string(n) +
                               " d=" + std::to_string(d));
  }
  return static_cast<Real>(1.0L / denom);
}

template <typename Real>
Verdict classify_bipartition(const FermionState<Real>& state, int m, const Tolerances& tol = {}) {
  check_subsystem(state.shape(), m);
  const auto p = detail::trace_of_square(detail::reduce_wide(state, m));
  return detail::classify_purity(p, state.shape(), m, tol);
}

/// C = sqrt(alpha_N [(N-1) - sum_M binomial(N,M) Tr rho_M^2]), with a
/// per-bipartition separability verdict. For d == N the value is 0 and the
/// report is flagged degenerate.
template <typename Real>
ConcurrenceReport<Real> multipartite_concurrence(const FermionState<Real>& state,
                                                 const Tolerances& tol = {}) {
  using W = wide_t<Real>;
  const SystemShape& shape = state.shape();
  const int n = shape.particles;
  if (n < 2) throw ShapeError("multipartite concurrence needs N >= 2");

  ConcurrenceReport<Real> report;
  report.shape = shape;
  W bracket = static_cast<W>(n - 1);
  for (int m = 1; m <= n - 1; ++m) {
    const W p = detail::trace_of_square(detail::reduce_wide(state, m));
    const W multiplicity = static_cast<W>(binomial(n, m));
    bracket -= multiplicity * p;
    report.bipartitions.push_back({m, static_cast<Real>(p),
                                   Real(1) / static_cast<Real>(reduced_dimension(shape, m)),
                                   Real(1) / static_cast<Real>(multiplicity),
                                   detail::classify_purity(p, shape, m, tol)});
  }
  report.bracket = static_cast<Real>(bracket);

  const long double denom = detail::alpha_denominator(n, shape.modes);
  if (denom <= static_cast<long double>(tol.invariant)) {
    report.degenerate = true;
    report.value = 0;
    return report;
  }
  const W a = static_cast<W>(1.0L / denom);
  report.alpha = static_cast<Real>(a);
  if (bracket < W(0)) {
    if (bracket < -static_cast<W>(tol.clamp)) {
      throw BoundViolation("negative concurrence bracket " +
                           std::to_string(static_cast<double>(bracket)));
    }
    bracket = 0;
  }
  report.value = static_cast<Real>(std::sqrt(a * bracket));
  return report;
}

/// Two-fermion concurrence from the one-body purity, normalized by 2d/(d-2).
template <typename Real>
FlaggedValue<Real> c_ff_purity(const FermionState<Real>& state, const Tolerances& tol = {}) {
  using W = wide_t<Real>;
  const SystemShape& shape = state.shape();
  if (shape.particles != 2) throw ShapeError("c_ff_purity needs N = 2");
  if (shape.modes == 2) return {Real(0), true};
  const W p = detail::trace_of_square(detail::reduce_wide(state, 1));
  const W d = static_cast<W>(shape.modes);
  W bracket = W(0.5) - p;
  if (bracket < W(0)) {
    if (bracket < -static_cast<W>(tol.clamp)) {
      throw BoundViolation("one-body purity above 1/2");
    }
    bracket = 0;
  }
  return {static_cast<Real>(std::sqrt(W(2) * d / (d - W(2)) * bracket)), false};
}

/// 8 |Pf(w)| = 8 |w12 w34 + w13 w42 + w14 w23| for two fermions on four modes.
template <typename Real>
Real c_ff_wedge(const FermionState<Real>& state) {
  const SystemShape& shape = state.shape();
  if (shape.particles != 2 || shape.modes != 4) {
    throw ShapeError("c_ff_wedge is defined for N = 2, d = 4 only");
  }
  const auto w = to_antisym_tensor(state);
  return Real(8) * std::abs(w({1, 2}) * w({3, 4}) + w({1, 3}) * w({4, 2}) + w({1, 4}) * w({2, 3}));
}

/// Slater rank of a two-fermion state: half the number of significant
/// singular values of its antisymmetric coefficient matrix.
template <typename Real>
SlaterRankResult<Real> slater_rank_two_fermions(const FermionState<Real>& state,
                                                const Tolerances& tol = {}) {
  const SystemShape& shape = state.shape();
  if (shape.particles != 2) throw ShapeError("Slater rank is implemented for N = 2 only");
  const auto d = static_cast<Eigen::Index>(shape.modes);
  const auto w = to_antisym_tensor(state);
  const CMatrix<Real> matrix = Eigen::Map<const CMatrix<Real>>(w.entries().data(), d, d);

  Eigen::JacobiSVD<CMatrix<Real>> svd(matrix);
  const auto& sigma = svd.singularValues();
  const Real cutoff = static_cast<Real>(tol.slater_rank) * sigma(0);
  int significant = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > cutoff) ++significant;
  }

  SlaterRankResult<Real> result;
  result.rank = (significant + 1) / 2;
  // Pairs share a singular value; a = 2w gives the canonical amplitude 2 sigma.
  for (Eigen::Index k = 0; k + 1 < sigma.size() && k < 2 * result.rank; k += 2) {
    result.weights.push_back(Real(2) * sigma(k));
  }
  return result;
}

/// (f+_1 f+_2 f+_3 + f+_4 f+_5 f+_6)|0> / sqrt(2) on six modes.
template <typename Real = double>
FermionState<Real> fghz_state() {
  const SystemShape shape{6, 3};
  const OccupationBasis basis(shape);
  CVector<Real> amplitudes = CVector<Real>::Zero(static_cast<Eigen::Index>(basis.size()));
  const Real h = Real(1) / std::sqrt(Real(2));
  const int low[] = {1, 2, 3};
  const int high[] = {4, 5, 6};
  amplitudes(static_cast<Eigen::Index>(basis.rank(low))) = h;
  amplitudes(static_cast<Eigen::Index>(basis.rank(high))) = h;
  return FermionState<Real>(shape, std::move(amplitudes));
}

}  // namespace fermient
