#pragma once

// Campaign-level checks: random-state sweeps of the purity bounds, the
// diagonal-element identities behind them, and the sensitivity of two-copy
// concurrence estimates to a mismatch between the copies.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fermient/fock.hpp"
#include "fermient/tolerances.hpp"

namespace fermient {

/// One measured quantity and the threshold it must not exceed.
struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool passed = false;
};

struct CampaignReport {
  std::string kind;
  SystemShape shape;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  bool pass = false;

  /// nullptr if no check with that name was run.
  const Check* find(const std::string& name) const;
};

struct SensitivityRecord {
  double epsilon = 0;
  /// sqrt(<psi (x) psi'| A_f |psi (x) psi'>)
  double c_exp = 0;
  /// (C(psi) + C(psi')) / 2
  double c_mean = 0;
  double gap = 0;
};

struct SensitivitySweep {
  std::vector<SensitivityRecord> records;
  /// Seed of the direction actually used after any resampling.
  std::uint64_t direction_seed = 0;
  double base_concurrence = 0;
};

/// `points` values log-spaced over [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int points);

/// Unit vector orthogonal to `state` in the fermionic sector, drawn from
/// `seed` and then seed+1, seed+2, ... while the draw is parallel to `state`.
/// Returns the direction and the seed that produced it.
std::pair<FermionState<double>, std::uint64_t> orthogonal_direction(const FermionState<double>& state,
                                                                    std::uint64_t seed);

/// psi' = sqrt(1 - eps^2) psi + eps dpsi for each eps in (0, 0.5]; records are
/// sorted by eps. A direction whose gap stays below 1e-13 at every eps is
/// resampled.
SensitivitySweep sensitivity_sweep(const FermionState<double>& state, std::uint64_t direction_seed,
                                   std::span<const double> epsilons, const Tolerances& tol = {});

/// Least-squares slope of log(gap) against log(eps) over records with
/// gap > floor. Empty when fewer than two records qualify.
std::optional<double> fit_loglog_slope(std::span<const SensitivityRecord> records,
                                       double floor = 1e-13);

/// Random states against the purity bounds, random Slater states against the
/// equality case. Trial t draws its states from derive_seed(seed, 2t) and
/// derive_seed(seed, 2t + 1), so the report does not depend on `threads`.
CampaignReport inequality_campaign(SystemShape shape, std::size_t trials, std::uint64_t seed,
                                   unsigned threads = 1, const Tolerances& tol = {});

/// Diagonal identities for every M, plus the equality branch on a Slater
/// state and on an unequal two-term superposition of the same shape.
CampaignReport appendix_verify(const FermionState<double>& state, const Tolerances& tol = {});

/// sqrt(w_first) |first tuple> + sqrt(1 - w_first) |second tuple>. The tuples
/// are {1..N} and {d-N+1..d} when d >= 2N, otherwise {1..N} and
/// {1..N-2, d-1, d}. Needs d >= N + 2.
FermionState<double> two_term_state(SystemShape shape, double w_first);

}  // namespace fermient
