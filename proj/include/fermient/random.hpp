#pragma once

#include <cstdint>
#include <random>

#include "fermient/fock.hpp"

namespace fermient {

/// splitmix64 mix of (seed, index); gives every trial its own stream so
/// results do not depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

template <typename Real>
CMatrix<Real> gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix<Real> m(rows, cols);
  // Column-major fill keeps the draw order fixed for a given seed.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex<Real>(static_cast<Real>(re), static_cast<Real>(im));
    }
  }
  return m;
}

/// Q factor of a Gaussian matrix with the phases of diag(R) divided out.
template <typename Real>
CMatrix<Real> haar_columns(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const CMatrix<Real> g = gaussian_matrix<Real>(rows, cols, rng);
  Eigen::HouseholderQR<CMatrix<Real>> qr(g);
  CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(rows, cols);
  const CMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Complex<Real> diag = r(j, j);
    const Real mag = std::abs(diag);
    if (mag > Real(0)) q.col(j) *= diag / mag;
  }
  return q;
}

}  // namespace detail

/// Uniform on the unit sphere of C^binomial(d,N): Gaussian amplitudes, normalized.
template <typename Real = double>
FermionState<Real> random_state(SystemShape shape, std::uint64_t seed) {
  shape.validate();
  std::mt19937_64 rng(seed);
  CVector<Real> amplitudes =
      detail::gaussian_matrix<Real>(static_cast<Eigen::Index>(shape.dimension()), 1, rng);
  return FermionState<Real>::normalized(shape, std::move(amplitudes));
}

/// Wedge of N orthonormalized Gaussian orbitals: a single Slater determinant
/// in a random single-particle basis.
template <typename Real = double>
FermionState<Real> random_slater_state(SystemShape shape, std::uint64_t seed) {
  shape.validate();
  std::mt19937_64 rng(seed);
  const CMatrix<Real> orbitals = detail::haar_columns<Real>(shape.modes, shape.particles, rng);
  return slater_from_orbitals<Real>(shape, orbitals);
}

/// Haar-distributed d x d unitary.
template <typename Real = double>
CMatrix<Real> random_unitary(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return detail::haar_columns<Real>(d, d, rng);
}

}  // namespace fermient
