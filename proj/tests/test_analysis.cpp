#include <gtest/gtest.h>

#include "fermient/analysis.hpp"
#include "fermient/concurrence.hpp"
#include "fermient/random.hpp"

using namespace fermient;

namespace {

void expect_all_pass(const CampaignReport& report) {
  EXPECT_TRUE(report.pass);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << " = " << c.value;
}

}  // namespace

TEST(LogSpaced, EndpointsAndRatio) {
  const auto eps = log_spaced(1e-3, 1e-1, 5);
  ASSERT_EQ(eps.size(), 5u);
  EXPECT_DOUBLE_EQ(eps.front(), 1e-3);
  EXPECT_DOUBLE_EQ(eps.back(), 1e-1);
  for (std::size_t k = 1; k < eps.size(); ++k) EXPECT_NEAR(eps[k] / eps[k - 1], std::sqrt(10.0), 1e-12);
  EXPECT_THROW(log_spaced(0.0, 1.0, 3), RangeError);
  EXPECT_THROW(log_spaced(1e-3, 1e-1, 0), RangeError);
}

TEST(InequalityCampaign, PassesOnSeveralShapes) {
  for (const auto& shape : {SystemShape{4, 2}, SystemShape{6, 3}, SystemShape{7, 4}}) {
    const auto report = inequality_campaign(shape, 50, 1234);
    EXPECT_EQ(report.kind, "inequality");
    EXPECT_EQ(report.trials, 50u);
    ASSERT_NE(report.find("upper_bound_violation"), nullptr);
    ASSERT_NE(report.find("lower_bound_violation"), nullptr);
    EXPECT_EQ(report.find("no_such_check"), nullptr);
    expect_all_pass(report);
  }
}

TEST(InequalityCampaign, IndependentOfThreadCount) {
  const SystemShape shape{6, 3};
  const auto one = inequality_campaign(shape, 40, 99, 1);
  const auto four = inequality_campaign(shape, 40, 99, 4);
  ASSERT_EQ(one.checks.size(), four.checks.size());
  for (std::size_t k = 0; k < one.checks.size(); ++k) {
    EXPECT_EQ(one.checks[k].name, four.checks[k].name);
    EXPECT_EQ(one.checks[k].value, four.checks[k].value);
  }
}

TEST(InequalityCampaign, RepeatRunsAreIdentical) {
  const auto a = inequality_campaign(SystemShape{5, 2}, 30, 7, 2);
  const auto b = inequality_campaign(SystemShape{5, 2}, 30, 7, 2);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t k = 0; k < a.checks.size(); ++k) EXPECT_EQ(a.checks[k].value, b.checks[k].value);
}

TEST(InequalityCampaign, RejectsZeroTrials) {
  EXPECT_THROW(inequality_campaign(SystemShape{4, 2}, 0, 1), RangeError);
}

TEST(AppendixVerify, FghzAndRandomStates) {
  expect_all_pass(appendix_verify(fghz_state()));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto report = appendix_verify(random_state(SystemShape{6, 3}, seed));
    expect_all_pass(report);
    ASSERT_NE(report.find("strict_branch_two_term"), nullptr);
  }
}

TEST(AppendixVerify, TwoTermState) {
  const auto s = two_term_state(SystemShape{6, 3}, 0.7);
  expect_all_pass(appendix_verify(s));
  EXPECT_GT(multipartite_concurrence(s).value, 0.1);
}

TEST(AppendixVerify, SmallShapesSkipStrictBranch) {
  const auto report = appendix_verify(random_state(SystemShape{4, 3}, 5));
  expect_all_pass(report);
  EXPECT_EQ(report.find("strict_branch_two_term"), nullptr);
}

TEST(TwoTermState, TupleChoice) {
  // d >= 2N: disjoint tuples.
  const auto wide = two_term_state(SystemShape{6, 3}, 0.25);
  EXPECT_NEAR(std::norm(wide.amplitudes()(0)), 0.25, 1e-15);
  EXPECT_NEAR(std::norm(wide.amplitudes()(19)), 0.75, 1e-15);
  // d < 2N: {1..N} and {1..N-2, d-1, d}.
  const auto narrow = two_term_state(SystemShape{6, 4}, 0.5);
  const int second[] = {1, 2, 5, 6};
  EXPECT_NEAR(std::norm(narrow.amplitude(second)), 0.5, 1e-15);
  EXPECT_GT(multipartite_concurrence(narrow).value, 0.1);
  EXPECT_THROW(two_term_state(SystemShape{5, 4}, 0.5), ShapeError);
  EXPECT_THROW(two_term_state(SystemShape{6, 3}, 1.0), RangeError);
}

TEST(Sensitivity, OrthogonalDirection) {
  const auto s = random_state(SystemShape{6, 3}, 1);
  const auto [direction, used] = orthogonal_direction(s, 77);
  EXPECT_EQ(used, 77u);
  EXPECT_NEAR(std::abs(s.amplitudes().dot(direction.amplitudes())), 0.0, 1e-14);
  EXPECT_NEAR(direction.amplitudes().norm(), 1.0, 1e-14);
}

TEST(Sensitivity, NoOrthogonalDirectionInOneDimensionalSpace) {
  EXPECT_THROW(orthogonal_direction(slater_state(4, {1, 2, 3, 4}), 0), DegenerateDirection);
}

TEST(Sensitivity, RejectsEpsilonOutOfRange) {
  const std::vector<double> bad = {0.01, 0.9};
  EXPECT_THROW(sensitivity_sweep(fghz_state(), 1, bad), RangeError);
  const std::vector<double> zero = {0.0};
  EXPECT_THROW(sensitivity_sweep(fghz_state(), 1, zero), RangeError);
}

TEST(Sensitivity, SecondOrderScaling) {
  const auto eps = log_spaced(1e-3, 1e-1, 9);
  std::vector<FermionState<double>> bases = {fghz_state()};
  for (std::uint64_t seed = 0; seed < 5; ++seed) bases.push_back(random_state(SystemShape{6, 3}, seed));
  for (std::size_t b = 0; b < bases.size(); ++b) {
    const auto sweep = sensitivity_sweep(bases[b], 500 + b, eps);
    ASSERT_EQ(sweep.records.size(), eps.size());
    const auto slope = fit_loglog_slope(sweep.records);
    ASSERT_TRUE(slope.has_value());
    EXPECT_GE(*slope, 1.7) << b;
    EXPECT_LE(*slope, 2.3) << b;
    EXPECT_LT(sweep.records.front().gap, 1e-5);
    for (std::size_t k = 1; k < sweep.records.size(); ++k) {
      EXPECT_GT(sweep.records[k].epsilon, sweep.records[k - 1].epsilon);
    }
  }
}

TEST(Sensitivity, HalvingEpsilonQuartersTheGap) {
  const std::vector<double> eps = {0.0125, 0.025, 0.05};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto sweep = sensitivity_sweep(random_state(SystemShape{6, 3}, 40 + seed), seed, eps);
    for (std::size_t k = 1; k < sweep.records.size(); ++k) {
      const double ratio = sweep.records[k].gap / sweep.records[k - 1].gap;
      EXPECT_GE(ratio, 3.0) << seed;
      EXPECT_LE(ratio, 5.0) << seed;
    }
  }
}

TEST(Sensitivity, DeterministicPerSeed) {
  const auto eps = log_spaced(1e-3, 1e-1, 4);
  const auto a = sensitivity_sweep(fghz_state(), 3, eps);
  const auto b = sensitivity_sweep(fghz_state(), 3, eps);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) EXPECT_EQ(a.records[k].gap, b.records[k].gap);
  EXPECT_EQ(a.direction_seed, b.direction_seed);
  EXPECT_NEAR(a.base_concurrence, 1.0, 1e-12);
}

TEST(Sensitivity, SlopeFitNeedsTwoPoints) {
  std::vector<SensitivityRecord> records = {{1e-2, 0, 0, 1e-4}};
  EXPECT_FALSE(fit_loglog_slope(records).has_value());
  records.push_back({1e-1, 0, 0, 1e-2});
  EXPECT_NEAR(*fit_loglog_slope(records), 2.0, 1e-12);
  records.push_back({1e-3, 0, 0, 0.0});
  EXPECT_NEAR(*fit_loglog_slope(records), 2.0, 1e-12);
}
