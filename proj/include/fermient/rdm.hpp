#pragma once

// M-particle reduced density matrices of pure N-fermion states.
//
// Writing V(K, m) = sign(K, m) a(K u m) for an ordered M-tuple K and a
// disjoint ordered (N-M)-tuple m, where sign(K, m) is the parity sorting the
// concatenation (K, m), the reduced state in the M-particle occupation basis
// is rho_M = V V^+ / Tr(V V^+). Every occupied N-tuple contributes to
// binomial(N, M) entries of V, so Tr(V V^+) = binomial(N, M) for a unit state.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "fermient/fock.hpp"
#include "fermient/tolerances.hpp"

namespace fermient {

enum class BasisKind {
  /// binomial(d, M) ordered M-tuples.
  Occupation,
  /// d^M product basis.
  FirstQuantized,
};

template <typename Real = double>
struct DensityMatrix {
  BasisKind basis = BasisKind::Occupation;
  SystemShape shape;
  int subsystem = 0;
  CMatrix<Real> matrix;

  Real trace_error() const { return std::abs(matrix.trace() - Complex<Real>(1)); }

  Real hermiticity_defect() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  }

  /// Ascending eigenvalues; values in [-floor, 0) are reported as 0.
  Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues(double floor = 1e-10) const {
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(matrix, Eigen::EigenvaluesOnly);
    Eigen::Matrix<Real, Eigen::Dynamic, 1> values = solver.eigenvalues();
    for (auto& v : values) {
      if (v < Real(0) && v >= -static_cast<Real>(floor)) v = Real(0);
    }
    return values;
  }

  bool is_valid(const Tolerances& tol = {}) const {
    if (hermiticity_defect() > static_cast<Real>(tol.exact)) return false;
    if (trace_error() > static_cast<Real>(tol.invariant)) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(matrix, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -static_cast<Real>(tol.invariant);
  }
};

/// Diagonal of rho_M rebuilt from amplitude weights alone, plus the residuals
/// of the identities that bound the purity.
template <typename Real = double>
struct DiagonalReport {
  int subsystem = 0;
  /// G_k over ordered M-tuples in lexicographic order.
  Eigen::Matrix<Real, Eigen::Dynamic, 1> diagonal;
  /// max_k |G_k - diag(rho_M)_k|.
  Real diagonal_residual = 0;
  /// max over occupied tuples i of |sum_k g_ki^2 - binomial(N,M)^-1|.
  Real g_identity_deviation = 0;
  /// sum_k G_k^2.
  Real sum_squares = 0;
  /// sum_{i<i'} d_i d_i' sum_k (g_ki - g_ki')^2; never negative.
  Real subtracted_term = 0;
  /// binomial(N,M)^-1 - subtracted_term.
  Real decomposition_rhs = 0;
  Real decomposition_residual = 0;
};

inline void check_subsystem(const SystemShape& shape, int m) {
  if (m < 1 || m > shape.particles - 1) {
    throw RangeError("subsystem size M=" + std::to_string(m) + " outside [1, " +
                     std::to_string(shape.particles - 1) + "]");
  }
}

namespace detail {

/// One nonzero entry V(K, m) of the matricized state.
template <typename Real>
struct SplitEntry {
  ModeMask kept;
  ModeMask traced;
  Complex<Real> value;
};

template <typename Real>
std::vector<SplitEntry<Real>> split_entries(const FermionState<Real>& state, int m) {
  const OccupationBasis basis(state.shape());
  std::vector<SplitEntry<Real>> entries;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Complex<Real> a = state.amplitudes()(static_cast<Eigen::Index>(r));
    if (a == Complex<Real>(0)) continue;
    const ModeMask occupied = basis.mask(r);
    for_each_subset_of_size(occupied, m, [&](ModeMask kept) {
      const ModeMask traced = occupied & ~kept;
      entries.push_back({kept, traced, Real(merge_sign(kept, traced)) * a});
    });
  }
  return entries;
}

/// rho_M in the occupation basis, accumulated at wide precision.
template <typename Real>
CMatrix<wide_t<Real>> reduce_wide(const FermionState<Real>& state, int m) {
  using W = wide_t<Real>;
  const SystemShape& shape = state.shape();
  const OccupationBasis rows(SystemShape{shape.modes, m});
  const OccupationBasis cols(SystemShape{shape.modes, shape.particles - m});

  CMatrix<W> v = CMatrix<W>::Zero(static_cast<Eigen::Index>(rows.size()),
                                  static_cast<Eigen::Index>(cols.size()));
  for (const auto& e : split_entries(state, m)) {
    v(static_cast<Eigen::Index>(rows.rank_of_mask(e.kept)),
      static_cast<Eigen::Index>(cols.rank_of_mask(e.traced))) = Complex<W>(e.value);
  }
  CMatrix<W> rho = v * v.adjoint();
  const W trace = rho.trace().real();
  rho /= trace;
  return rho;
}

/// Tr rho^2 at wide precision, with no Hermiticity assumption.
template <typename Derived>
auto trace_of_square(const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using W = wide_t<Real>;
  Complex<W> sum(0);
  for (Eigen::Index k = 0; k < rho.rows(); ++k) {
    for (Eigen::Index l = 0; l < rho.cols(); ++l) {
      sum += Complex<W>(rho(k, l)) * Complex<W>(rho(l, k));
    }
  }
  return sum.real();
}

/// Purity by contracting amplitudes over the kept index only:
/// Tr rho_M^2 = sum_{m,m'} |sum_K conj(V(K,m)) V(K,m')|^2 / Tr(V V^+)^2.
template <typename Real>
wide_t<Real> purity_direct_wide(const FermionState<Real>& state, int m) {
  using W = wide_t<Real>;
  const SystemShape& shape = state.shape();
  const OccupationBasis traced_basis(SystemShape{shape.modes, shape.particles - m});
  const auto traced_size = static_cast<std::uint64_t>(traced_basis.size());

  std::unordered_map<ModeMask, std::vector<std::pair<std::uint64_t, Complex<W>>>, ModeMaskHash>
      by_kept;
  W norm_sq = 0;
  for (const auto& e : split_entries(state, m)) {
    by_kept[e.kept].emplace_back(traced_basis.rank_of_mask(e.traced), Complex<W>(e.value));
    norm_sq += std::norm(Complex<W>(e.value));
  }

  std::unordered_map<std::uint64_t, Complex<W>> gram;
  for (const auto& [kept, column] : by_kept) {
    for (const auto& [row_a, va] : column) {
      for (const auto& [row_b, vb] : column) {
        gram[row_a * traced_size + row_b] += std::conj(va) * vb;
      }
    }
  }
  W sum = 0;
  for (const auto& [key, value] : gram) sum += std::norm(value);
  return sum / (norm_sq * norm_sq);
}

}  // namespace detail

/// M-particle reduced density matrix in the binomial(d, M) occupation basis.
template <typename Real>
DensityMatrix<Real> reduce(const FermionState<Real>& state, int m) {
  check_subsystem(state.shape(), m);
  return {BasisKind::Occupation, state.shape(), m,
          detail::reduce_wide(state, m).template cast<Complex<Real>>()};
}

/// Tr rho^2.
template <typename Real>
Real purity(const DensityMatrix<Real>& rho) {
  return static_cast<Real>(detail::trace_of_square(rho.matrix));
}

/// Tr rho_M^2 straight from the amplitudes; rho_M is never formed.
template <typename Real>
Real purity_direct(const FermionState<Real>& state, int m) {
  check_subsystem(state.shape(), m);
  return static_cast<Real>(detail::purity_direct_wide(state, m));
}

/// Diagonal of rho_M from the weights d_i = |a_i|^2 of the occupied tuples:
/// G_k = sum_i d_i g_ki with g_ki = M!(N-M)!/N! when k is contained in i.
/// The decomposition sum_k G_k^2 = binomial(N,M)^-1 - sum_{i<i'} d_i d_i'
/// sum_k (g_ki - g_ki')^2 is evaluated term by term.
template <typename Real>
DiagonalReport<Real> diagonal_via_appendix(const FermionState<Real>& state, int m) {
  const SystemShape& shape = state.shape();
  check_subsystem(shape, m);
  const int n = shape.particles;
  const OccupationBasis basis(shape);
  const OccupationBasis kept_basis(SystemShape{shape.modes, m});
  const Real g = static_cast<Real>(factorial(m)) * static_cast<Real>(factorial(n - m)) /
                 static_cast<Real>(factorial(n));
  const Real bound = Real(1) / static_cast<Real>(binomial(n, m));

  struct Occupied {
    ModeMask mask;
    Real weight;
  };
  std::vector<Occupied> occupied;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Real weight = std::norm(state.amplitudes()(static_cast<Eigen::Index>(r)));
    if (weight > Real(0)) occupied.push_back({basis.mask(r), weight});
  }

  DiagonalReport<Real> report;
  report.subsystem = m;
  report.diagonal = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(
      static_cast<Eigen::Index>(kept_basis.size()));
  for (const auto& occ : occupied) {
    Real g_squares = 0;
    for_each_subset_of_size(occ.mask, m, [&](ModeMask k) {
      report.diagonal(static_cast<Eigen::Index>(kept_basis.rank_of_mask(k))) += occ.weight * g;
      g_squares += g * g;
    });
    report.g_identity_deviation = std::max(report.g_identity_deviation, std::abs(g_squares - bound));
  }

  const auto rho = detail::reduce_wide(state, m);
  for (Eigen::Index k = 0; k < report.diagonal.size(); ++k) {
    report.diagonal_residual =
        std::max(report.diagonal_residual,
                 std::abs(report.diagonal(k) - static_cast<Real>(rho(k, k).real())));
  }

  report.sum_squares = report.diagonal.squaredNorm();
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    for (std::size_t j = i + 1; j < occupied.size(); ++j) {
      // sum_k (g_ki - g_kj)^2: k ranges over subsets of either tuple.
      Real diff = 0;
      for_each_subset_of_size(occupied[i].mask, m, [&](ModeMask k) {
        const Real gj = (k & ~occupied[j].mask) == 0 ? g : Real(0);
        diff += (g - gj) * (g - gj);
      });
      for_each_subset_of_size(occupied[j].mask, m, [&](ModeMask k) {
        if ((k & ~occupied[i].mask) != 0) diff += g * g;
      });
      report.subtracted_term += occupied[i].weight * occupied[j].weight * diff;
    }
  }
  report.decomposition_rhs = bound - report.subtracted_term;
  report.decomposition_residual = std::abs(report.sum_squares - report.decomposition_rhs);
  return report;
}

}  // namespace fermient
