#include "fermient/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "fermient/concurrence.hpp"
#include "fermient/random.hpp"
#include "fermient/rdm.hpp"
#include "fermient/two_copy.hpp"

namespace fermient {

namespace {

constexpr double kGapFloor = 1e-13;
constexpr int kMaxResamples = 32;

Check make_check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

void finalize(CampaignReport& report) {
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const Check& c) { return c.passed; });
}

/// Worst margins seen over a range of trials. Every field is a max, so
/// merging chunks in any order gives the same result.
struct Margins {
  double upper = -1.0;
  double lower = -1.0;
  double slater_equality = 0.0;
  double route_residual = 0.0;
  double complement = 0.0;

  void merge(const Margins& o) {
    upper = std::max(upper, o.upper);
    lower = std::max(lower, o.lower);
    slater_equality = std::max(slater_equality, o.slater_equality);
    route_residual = std::max(route_residual, o.route_residual);
    complement = std::max(complement, o.complement);
  }
};

Margins run_trials(SystemShape shape, std::size_t begin, std::size_t end, std::uint64_t seed) {
  Margins margins;
  const int n = shape.particles;
  for (std::size_t t = begin; t < end; ++t) {
    const auto state = random_state(shape, derive_seed(seed, 2 * t));
    const auto slater = random_slater_state(shape, derive_seed(seed, 2 * t + 1));
    std::vector<double> purities(static_cast<std::size_t>(n), 0.0);
    for (int m = 1; m <= n - 1; ++m) {
      const double p = purity(reduce(state, m));
      purities[static_cast<std::size_t>(m)] = p;
      const double upper = 1.0 / static_cast<double>(binomial(n, m));
      const double lower = 1.0 / static_cast<double>(reduced_dimension(shape, m));
      margins.upper = std::max(margins.upper, p - upper);
      margins.lower = std::max(margins.lower, lower - p);
      margins.route_residual =
          std::max(margins.route_residual, std::abs(purity_direct(state, m) - p));
      margins.slater_equality =
          std::max(margins.slater_equality, std::abs(purity(reduce(slater, m)) - upper));
    }
    for (int m = 1; m <= n - 1; ++m) {
      margins.complement =
          std::max(margins.complement, std::abs(purities[static_cast<std::size_t>(m)] -
                                                purities[static_cast<std::size_t>(n - m)]));
    }
  }
  return margins;
}

}  // namespace

const Check* CampaignReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw RangeError("log_spaced needs points >= 1 and 0 < lo <= hi");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    out.push_back(lo);
    return out;
  }
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(points - 1);
  for (int k = 0; k < points; ++k) out.push_back(std::exp(std::log(lo) + step * k));
  out.back() = hi;
  return out;
}

std::pair<FermionState<double>, std::uint64_t> orthogonal_direction(const FermionState<double>& state,
                                                                    std::uint64_t seed) {
  const auto& psi = state.amplitudes();
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    const auto draw = random_state(state.shape(), s);
    CVector<double> v = draw.amplitudes() - psi * psi.dot(draw.amplitudes());
    if (v.norm() > 1e-8) {
      return {FermionState<double>::normalized(state.shape(), std::move(v)), s};
    }
  }
  throw DegenerateDirection("every sampled direction was parallel to the state");
}

SensitivitySweep sensitivity_sweep(const FermionState<double>& state, std::uint64_t direction_seed,
                                   std::span<const double> epsilons, const Tolerances& tol) {
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps <= 0.5)) throw RangeError("epsilon must lie in (0, 0.5]");
  }
  std::vector<double> sorted(epsilons.begin(), epsilons.end());
  std::sort(sorted.begin(), sorted.end());

  const auto af = observable_Af<double>(state.shape(), ProjectorSign::Plus, tol);
  const double c_base = multipartite_concurrence(state, tol).value;

  std::uint64_t seed = direction_seed;
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    auto [direction, used] = orthogonal_direction(state, seed);
    SensitivitySweep sweep;
    sweep.direction_seed = used;
    sweep.base_concurrence = c_base;
    bool any_resolved = false;
    for (double eps : sorted) {
      CVector<double> mixed =
          std::sqrt(1.0 - eps * eps) * state.amplitudes() + eps * direction.amplitudes();
      const auto perturbed = FermionState<double>::normalized(state.shape(), std::move(mixed));
      const auto e = expectation(af, CopyPair<double>(state, perturbed));
      SensitivityRecord rec;
      rec.epsilon = eps;
      rec.c_exp = std::sqrt(std::max(0.0, e.value));
      rec.c_mean = 0.5 * (c_base + multipartite_concurrence(perturbed, tol).value);
      rec.gap = std::abs(rec.c_exp - rec.c_mean);
      any_resolved = any_resolved || rec.gap > kGapFloor;
      sweep.records.push_back(rec);
    }
    if (any_resolved || sorted.empty()) return sweep;
    seed = used + 1;
  }
  throw DegenerateDirection("no sampled direction gave a resolvable second-order gap");
}

std::optional<double> fit_loglog_slope(std::span<const SensitivityRecord> records, double floor) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : records) {
    if (r.gap > floor) {
      xs.push_back(std::log(r.epsilon));
      ys.push_back(std::log(r.gap));
    }
  }
  if (xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

CampaignReport inequality_campaign(SystemShape shape, std::size_t trials, std::uint64_t seed,
                                   unsigned threads, const Tolerances& tol) {
  shape.validate();
  if (trials < 1) throw RangeError("campaign needs at least one trial");
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));

  std::vector<Margins> partial(threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (trials + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = std::min(trials, w * chunk);
    const std::size_t end = std::min(trials, begin + chunk);
    workers.emplace_back([&, w, begin, end] { partial[w] = run_trials(shape, begin, end, seed); });
  }
  for (auto& worker : workers) worker.join();
  Margins total;
  for (const auto& p : partial) total.merge(p);

  CampaignReport report;
  report.kind = "inequality";
  report.shape = shape;
  report.trials = trials;
  report.seed = seed;
  if (shape.particles >= 2) {
    report.checks.push_back(make_check("upper_bound_violation", total.upper, tol.invariant));
    report.checks.push_back(make_check("lower_bound_violation", total.lower, tol.invariant));
    report.checks.push_back(
        make_check("slater_equality_deviation", total.slater_equality, tol.invariant));
    report.checks.push_back(make_check("purity_route_residual", total.route_residual, tol.invariant));
    report.checks.push_back(make_check("complement_symmetry", total.complement, tol.invariant));
  }
  finalize(report);
  return report;
}

FermionState<double> two_term_state(SystemShape shape, double w_first) {
  shape.validate();
  const int n = shape.particles;
  const int d = shape.modes;
  if (d < n + 2) throw ShapeError("two-term entangled state needs d >= N + 2");
  if (!(w_first > 0.0 && w_first < 1.0)) throw RangeError("weight must lie in (0, 1)");

  std::vector<int> first(static_cast<std::size_t>(n));
  std::iota(first.begin(), first.end(), 1);
  std::vector<int> second;
  if (d >= 2 * n) {
    for (int m = d - n + 1; m <= d; ++m) second.push_back(m);
  } else {
    for (int m = 1; m <= n - 2; ++m) second.push_back(m);
    second.push_back(d - 1);
    second.push_back(d);
  }
  const OccupationBasis basis(shape);
  CVector<double> a = CVector<double>::Zero(static_cast<Eigen::Index>(basis.size()));
  a(static_cast<Eigen::Index>(basis.rank(first))) = std::sqrt(w_first);
  a(static_cast<Eigen::Index>(basis.rank(second))) = std::sqrt(1.0 - w_first);
  return FermionState<double>::normalized(shape, std::move(a));
}

CampaignReport appendix_verify(const FermionState<double>& state, const Tolerances& tol) {
  const SystemShape& shape = state.shape();
  const int n = shape.particles;

  CampaignReport report;
  report.kind = "appendix";
  report.shape = shape;
  report.trials = 1;

  double diag_residual = 0.0;
  double g_identity = 0.0;
  double decomposition = 0.0;
  double negative_subtracted = 0.0;
  double single_term_inconsistency = 0.0;
  for (int m = 1; m <= n - 1; ++m) {
    const auto diag = diagonal_via_appendix(state, m);
    diag_residual = std::max(diag_residual, diag.diagonal_residual);
    g_identity = std::max(g_identity, diag.g_identity_deviation);
    decomposition = std::max(decomposition, diag.decomposition_residual);
    negative_subtracted = std::max(negative_subtracted, -diag.subtracted_term);
    // With no cross terms the state is one determinant, so the bound is attained.
    if (diag.subtracted_term == 0.0) {
      const double upper = 1.0 / static_cast<double>(binomial(n, m));
      single_term_inconsistency =
          std::max(single_term_inconsistency, std::abs(purity(reduce(state, m)) - upper));
    }
  }
  if (n >= 2) {
    report.checks.push_back(make_check("diagonal_residual", diag_residual, tol.exact));
    report.checks.push_back(make_check("g_square_identity", g_identity, tol.exact));
    report.checks.push_back(make_check("decomposition_residual", decomposition, tol.invariant));
    report.checks.push_back(make_check("subtracted_term_negativity", negative_subtracted, tol.exact));
    report.checks.push_back(
        make_check("single_term_equality", single_term_inconsistency, tol.invariant));

    // Positive branch: determinants attain the bound in any single-particle basis.
    double positive = 0.0;
    std::vector<int> modes(static_cast<std::size_t>(n));
    std::iota(modes.begin(), modes.end(), 1);
    const auto basic = slater_state<double>(shape, modes);
    const auto rotated = random_slater_state(shape, 0x5eed);
    for (int m = 1; m <= n - 1; ++m) {
      const double upper = 1.0 / static_cast<double>(binomial(n, m));
      positive = std::max(positive, std::abs(purity(reduce(basic, m)) - upper));
      positive = std::max(positive, std::abs(purity(reduce(rotated, m)) - upper));
      positive = std::max(positive, diagonal_via_appendix(basic, m).subtracted_term);
    }
    report.checks.push_back(make_check("equality_branch_slater", positive, tol.invariant));

    // Negative branch: two determinants with unequal weights fall strictly
    // below the bound, by exactly the (positive) subtracted term.
    if (shape.modes >= n + 2) {
      const auto mixed = two_term_state(shape, 0.9);
      double worst_gap = 0.0;
      bool first = true;
      for (int m = 1; m <= n - 1; ++m) {
        const auto diag = diagonal_via_appendix(mixed, m);
        const double upper = 1.0 / static_cast<double>(binomial(n, m));
        const double gap = upper - purity(reduce(mixed, m));
        const double margin = std::min(gap, diag.subtracted_term);
        worst_gap = first ? margin : std::min(worst_gap, margin);
        first = false;
      }
      // Passes when the smallest gap clears the separability band.
      report.checks.push_back(
          make_check("strict_branch_two_term", tol.separability - worst_gap, 0.0));
    }
  }
  finalize(report);
  return report;
}

}  // namespace fermient
