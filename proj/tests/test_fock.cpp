#include <gtest/gtest.h>

#include "fermient/concurrence.hpp"
#include "fermient/fock.hpp"
#include "fermient/random.hpp"
#include "oracles.hpp"

using namespace fermient;

namespace {

const std::vector<SystemShape> kShapes = {{2, 1}, {4, 2}, {5, 2}, {6, 3}, {7, 3}, {8, 4}, {6, 5}, {5, 5}};

}  // namespace

TEST(OccupationBasis, FourModesTwoParticles) {
  const auto basis = enumerate_basis(make_shape(4, 2));
  ASSERT_EQ(basis.size(), 6u);
  const std::vector<std::vector<int>> expected = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const auto t = basis.tuple(r);
    EXPECT_EQ(std::vector<int>(t.begin(), t.end()), expected[r]);
  }
}

TEST(OccupationBasis, SizeIsBinomial) {
  EXPECT_EQ(enumerate_basis(make_shape(6, 3)).size(), 20u);
  EXPECT_EQ(enumerate_basis(make_shape(8, 4)).size(), 70u);
}

TEST(OccupationBasis, RejectsInvalidShapes) {
  EXPECT_THROW(enumerate_basis(SystemShape{3, 4}), ShapeError);
  EXPECT_THROW(enumerate_basis(SystemShape{3, 0}), ShapeError);
  EXPECT_THROW(make_shape(128, 2), ShapeError);
}

TEST(OccupationBasis, RankUnrankAndOracleOrder) {
  for (const auto& shape : kShapes) {
    const OccupationBasis basis(shape);
    const auto reference = oracle::combinations(shape.modes, shape.particles);
    ASSERT_EQ(basis.size(), reference.size());
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const auto t = basis.tuple(r);
      EXPECT_EQ(std::vector<int>(t.begin(), t.end()), reference[r]);
      EXPECT_EQ(basis.rank(t), r);
      EXPECT_EQ(basis.rank_of_mask(basis.mask(r)), r);
    }
  }
}

TEST(OccupationBasis, RankRejectsBadTuples) {
  const OccupationBasis basis(make_shape(5, 3));
  EXPECT_THROW(basis.rank(std::vector<int>{1, 1, 2}), ModeError);
  EXPECT_THROW(basis.rank(std::vector<int>{3, 2, 1}), ModeError);
  EXPECT_THROW(basis.rank(std::vector<int>{1, 2, 6}), ModeError);
  EXPECT_THROW(basis.rank(std::vector<int>{1, 2}), ModeError);
}

TEST(SlaterState, OrderedModes) {
  const auto s = slater_state(4, {1, 2});
  EXPECT_EQ(s.amplitudes()(0), std::complex<double>(1.0));
  EXPECT_DOUBLE_EQ(s.amplitudes().tail(5).norm(), 0.0);
}

TEST(SlaterState, OneTranspositionFlipsSign) {
  const auto s = slater_state(4, {2, 1});
  EXPECT_EQ(s.amplitudes()(0), std::complex<double>(-1.0));
}

TEST(SlaterState, HighModes) {
  const auto s = slater_state(6, {4, 5, 6});
  const int t[] = {4, 5, 6};
  EXPECT_EQ(s.amplitude(t), std::complex<double>(1.0));
  EXPECT_EQ(s.amplitudes()(19), std::complex<double>(1.0));
}

TEST(SlaterState, ParityOfLongerSequences) {
  // (3,1,2) is an even permutation, (2,3,1,4) even, (4,3,2,1) even, (1,3,2,4) odd.
  EXPECT_EQ(slater_state(4, {3, 1, 2}).amplitudes()(0).real(), 1.0);
  EXPECT_EQ(slater_state(4, {2, 3, 1, 4}).amplitudes()(0).real(), 1.0);
  EXPECT_EQ(slater_state(4, {4, 3, 2, 1}).amplitudes()(0).real(), 1.0);
  EXPECT_EQ(slater_state(4, {1, 3, 2, 4}).amplitudes()(0).real(), -1.0);
}

TEST(SlaterState, ManyModes) {
  const auto s = slater_state(100, {90, 2});
  const int t[] = {2, 90};
  EXPECT_EQ(s.amplitude(t), std::complex<double>(-1.0));
  EXPECT_EQ(OccupationBasis(make_shape(100, 2)).rank(t), 186u);
}

TEST(SlaterState, RejectsBadModes) {
  EXPECT_THROW(slater_state(4, {1, 1}), ModeError);
  EXPECT_THROW(slater_state(4, {0, 1}), ModeError);
  EXPECT_THROW(slater_state(4, {2, 5}), ModeError);
}

TEST(FermionState, RejectsBadNormAndLength) {
  const SystemShape shape = make_shape(4, 2);
  EXPECT_THROW(FermionState<double>(shape, Eigen::VectorXcd::Constant(6, 1.0)), NormError);
  EXPECT_THROW(FermionState<double>(shape, Eigen::VectorXcd::Zero(5)), ShapeError);
  EXPECT_THROW(FermionState<double>::normalized(shape, Eigen::VectorXcd::Zero(6)), NormError);
}

TEST(AntisymTensor, TwoFermionMatrixGivesUnitAmplitude) {
  AntisymTensor<double> w(make_shape(4, 2));
  w({1, 2}) = 0.5;
  w({2, 1}) = -0.5;
  // Tr(w w^+) = 1/2.
  EXPECT_NEAR(w.entries().squaredNorm(), 0.5, 1e-15);
  const auto s = from_antisym_tensor(w);
  EXPECT_NEAR(std::abs(s.amplitudes()(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(s.amplitudes().tail(5).norm(), 0.0, 1e-15);
}

TEST(AntisymTensor, FghzEntries) {
  const auto w = to_antisym_tensor(fghz_state());
  const double expected = 1.0 / (6.0 * std::sqrt(2.0));
  EXPECT_NEAR(w({1, 2, 3}).real(), expected, 1e-15);
  EXPECT_NEAR(w({4, 5, 6}).real(), expected, 1e-15);
  EXPECT_NEAR(w({2, 1, 3}).real(), -expected, 1e-15);
  EXPECT_NEAR(w({6, 4, 5}).real(), expected, 1e-15);
  EXPECT_NEAR(std::abs(w({1, 1, 3})), 0.0, 0.0);
  EXPECT_NEAR(w.entries().squaredNorm(), 1.0 / 6.0, 1e-15);
}

TEST(AntisymTensor, RoundTripOnRandomStates) {
  for (const auto& shape : kShapes) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = random_state(shape, seed);
      const auto t = to_antisym_tensor(s);
      EXPECT_LE(t.antisymmetry_defect(), 1e-15);
      const auto back = from_antisym_tensor(t);
      EXPECT_LE((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
      const auto t2 = to_antisym_tensor(back);
      EXPECT_LE((t2.entries() - t.entries()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(AntisymTensor, RejectsInvalidTensors) {
  AntisymTensor<double> not_antisym(make_shape(4, 2));
  not_antisym({1, 2}) = 0.5;
  not_antisym({2, 1}) = 0.5;
  EXPECT_THROW(from_antisym_tensor(not_antisym), AntisymmetryError);

  AntisymTensor<double> diagonal(make_shape(4, 2));
  diagonal({1, 2}) = 0.5;
  diagonal({2, 1}) = -0.5;
  diagonal({3, 3}) = 0.1;
  EXPECT_THROW(from_antisym_tensor(diagonal), AntisymmetryError);

  AntisymTensor<double> bad_norm(make_shape(4, 2));
  bad_norm({1, 2}) = 1.0;
  bad_norm({2, 1}) = -1.0;
  EXPECT_THROW(from_antisym_tensor(bad_norm), NormError);
}

TEST(EmbedFirstQuantized, TwoModeSlater) {
  const auto psi = embed_first_quantized(slater_state(2, {1, 2}));
  const double h = 1.0 / std::sqrt(2.0);
  // Product basis order |11>, |12>, |21>, |22>.
  EXPECT_NEAR(psi.entries()(0).real(), 0.0, 0.0);
  EXPECT_NEAR(psi.entries()(1).real(), h, 1e-15);
  EXPECT_NEAR(psi.entries()(2).real(), -h, 1e-15);
  EXPECT_NEAR(psi.entries()(3).real(), 0.0, 0.0);
}

TEST(EmbedFirstQuantized, NormAntisymmetryAndOracle) {
  for (const auto& shape : kShapes) {
    const auto s = random_state(shape, 17);
    const auto psi = embed_first_quantized(s);
    EXPECT_NEAR(psi.entries().norm(), 1.0, 1e-12);
    for (int a = 1; a <= shape.particles; ++a) {
      for (int b = a + 1; b <= shape.particles; ++b) {
        const auto swapped = psi.swap_slots(a, b);
        EXPECT_LE((swapped.entries() + psi.entries()).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
    const auto reference = oracle::embed(s.amplitudes(), shape.modes, shape.particles);
    EXPECT_LE((reference - psi.entries()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ModeUnitary, IdentityLeavesStateUnchanged) {
  const auto s = random_state(make_shape(6, 3), 4);
  const auto out = apply_mode_unitary(s, Eigen::MatrixXcd::Identity(6, 6).eval());
  EXPECT_LE((out.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ModeUnitary, PermutationMapsSlaterToSlater) {
  // Mode i -> perm[i]; f+_1 f+_2 f+_3 -> f+_5 f+_1 f+_4, which sorts with one sign flip... checked below.
  const int perm[] = {5, 1, 4, 2, 6, 3};
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) u(perm[i] - 1, i) = 1.0;
  const auto out = apply_mode_unitary(slater_state(6, {1, 2, 3}), u);
  const int target[] = {5, 1, 4};
  const auto expected = slater_state<double>(make_shape(6, 3), target);
  EXPECT_LE((out.amplitudes() - expected.amplitudes()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ModeUnitary, CompositionAndNorm) {
  const SystemShape shape = make_shape(6, 3);
  const auto s = random_state(shape, 9);
  const auto u = random_unitary(6, 1);
  const auto v = random_unitary(6, 2);
  const auto uv = (u * v).eval();
  const auto two_steps = apply_mode_unitary(apply_mode_unitary(s, v), u);
  const auto one_step = apply_mode_unitary(s, uv);
  EXPECT_LE((two_steps.amplitudes() - one_step.amplitudes()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(one_step.amplitudes().norm(), 1.0, 1e-12);
}

TEST(ModeUnitary, AgreesWithTensorPowerOnFirstQuantizedVector) {
  for (const auto& shape : {SystemShape{4, 2}, SystemShape{5, 3}, SystemShape{6, 3}}) {
    const auto s = random_state(shape, 21);
    const auto u = random_unitary(shape.modes, 22);
    const auto rotated = embed_first_quantized(apply_mode_unitary(s, u)).entries();
    const auto reference = oracle::apply_tensor_power(embed_first_quantized(s).entries(), u,
                                                      shape.modes, shape.particles);
    EXPECT_LE((rotated - reference).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ModeUnitary, RejectsNonUnitary) {
  const auto s = random_state(make_shape(4, 2), 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
  m(0, 1) = 0.1;
  EXPECT_THROW(apply_mode_unitary(s, m), UnitarityError);
  EXPECT_THROW(apply_mode_unitary(s, Eigen::MatrixXcd::Identity(3, 3).eval()), UnitarityError);
}

TEST(RandomStates, DeterministicPerSeed) {
  const SystemShape shape = make_shape(6, 3);
  EXPECT_EQ(random_state(shape, 7).amplitudes(), random_state(shape, 7).amplitudes());
  EXPECT_NE(random_state(shape, 7).amplitudes(), random_state(shape, 8).amplitudes());
  EXPECT_EQ(random_slater_state(shape, 7).amplitudes(), random_slater_state(shape, 7).amplitudes());
}

TEST(RandomStates, UnitNorm) {
  for (const auto& shape : kShapes) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      EXPECT_NEAR(random_state(shape, seed).amplitudes().norm(), 1.0, 1e-12);
      EXPECT_NEAR(random_slater_state(shape, seed).amplitudes().norm(), 1.0, 1e-12);
    }
  }
}

TEST(RandomStates, UnitaryIsUnitary) {
  const auto u = random_unitary(7, 5);
  EXPECT_LE((u.adjoint() * u - Eigen::MatrixXcd::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-13);
}
