#pragma once

namespace fermient {

/// Numerical tolerances shared by every module. All absolute.
struct Tolerances {
  /// Invariant checks: norms, traces, purity bounds.
  double invariant = 1e-10;
  /// Exact algebraic identities (antisymmetry, idempotence, Hermiticity).
  double exact = 1e-12;
  /// Width of the band around binomial(N,M)^-1 that still counts as separable.
  double separability = 1e-8;
  /// Negative concurrence brackets down to -clamp are treated as zero.
  double clamp = 1e-10;
  /// Singular values below slater_rank * sigma_max are dropped.
  double slater_rank = 1e-8;
};

}  // namespace fermient
