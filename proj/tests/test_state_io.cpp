#include <gtest/gtest.h>

#include "fermient/concurrence.hpp"
#include "fermient/random.hpp"
#include "fermient/state_io.hpp"

using namespace fermient;

TEST(StateIo, WriteIsSparseAndCanonical) {
  const std::string text = serialize_state(fghz_state());
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(text, "occupation-v1\nd 6\nn 3\n1,2,3 " + format_real(h) + " 0\n4,5,6 " + format_real(h) + " 0\n");
}

TEST(StateIo, RoundTripIsExact) {
  for (const auto& shape : {SystemShape{4, 2}, SystemShape{6, 3}, SystemShape{8, 4}}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = random_state(shape, seed);
      const std::string text = serialize_state(s);
      const auto back = parse_state(text);
      EXPECT_EQ(back.amplitudes(), s.amplitudes());
      EXPECT_EQ(serialize_state(back), text);
    }
  }
}

TEST(StateIo, ParseToleratesCommentsAndOrder) {
  const auto s = parse_state(
      "# pair state\noccupation-v1\n\nd 4\nn 2\n3,4 0.70710678118654752 0\n# note\n1,2 0 0.70710678118654752\n");
  EXPECT_EQ(s.shape(), (SystemShape{4, 2}));
  EXPECT_NEAR(s.amplitudes()(0).imag(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.amplitudes()(5).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(c_ff_wedge(s), 1.0, 1e-15);
}

TEST(StateIo, NormBands) {
  // Off by 1e-8: fixed silently.
  const auto silent = parse_state("occupation-v1\nd 4\nn 2\n1,2 1.00000001 0\n");
  EXPECT_NEAR(silent.amplitudes().norm(), 1.0, 1e-15);
  // Off by 1e-3: needs the opt-in.
  const std::string off = "occupation-v1\nd 4\nn 2\n1,2 1.001 0\n";
  EXPECT_THROW(parse_state(off), NormError);
  EXPECT_NEAR(parse_state(off, {true}).amplitudes().norm(), 1.0, 1e-15);
  // Off by 0.2: always rejected.
  const std::string corrupt = "occupation-v1\nd 4\nn 2\n1,2 0.8 0\n";
  EXPECT_THROW(parse_state(corrupt), NormError);
  EXPECT_THROW(parse_state(corrupt, {true}), NormError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n"), NormError);
}

TEST(StateIo, MalformedInput) {
  EXPECT_THROW(parse_state(""), ParseError);
  EXPECT_THROW(parse_state("occupation-v2\nd 4\nn 2\n1,2 1 0\n"), ParseError);
  EXPECT_THROW(parse_state("occupation-v1\nn 2\nd 4\n1,2 1 0\n"), ParseError);
  EXPECT_THROW(parse_state("occupation-v1\nd four\nn 2\n1,2 1 0\n"), ParseError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n1,2 1\n"), ParseError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n1,2 1 0 0\n"), ParseError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n1,2 x 0\n"), ParseError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n1,2 nan 0\n"), ParseError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n1,2 0.6 0\n1,2 0.8 0\n"), ParseError);
}

TEST(StateIo, InvalidContent) {
  EXPECT_THROW(parse_state("occupation-v1\nd 2\nn 3\n1,2,3 1 0\n"), ShapeError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n2,1 1 0\n"), ModeError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n1,5 1 0\n"), ModeError);
  EXPECT_THROW(parse_state("occupation-v1\nd 4\nn 2\n1,2,3 1 0\n"), ModeError);
  try {
    parse_state("occupation-v1\nd 4\nn 2\n1,1 1 0\n");
    FAIL();
  } catch (const ModeError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(StateIo, FormatRealKeepsFullPrecision) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(0.0), "0");
  EXPECT_EQ(std::stod(format_real(1.0 / 3.0)), 1.0 / 3.0);
}
