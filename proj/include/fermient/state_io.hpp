#pragma once

// Text format "occupation-v1" for pure fermionic states:
//
//   occupation-v1
//   d 6
//   n 3
//   1,2,3 0.70710678118654757 0
//   4,5,6 0.70710678118654757 0
//
// One record per nonzero amplitude: ascending comma-separated 1-based modes,
// then the real and imaginary parts. Omitted tuples are zero. Blank lines and
// lines starting with '#' are ignored. Serialization is canonical: records in
// basis order, reals printed with 17 significant digits.

#include <iosfwd>
#include <string>
#include <string_view>

#include "fermient/fock.hpp"

namespace fermient {

inline constexpr std::string_view kStateFormatTag = "occupation-v1";

struct StateReadOptions {
  /// Rescale inputs whose norm is off by more than 1e-6 (up to 1e-2).
  bool renormalize = false;
};

/// Norm deviations |‖a‖ - 1| up to this are rounding and fixed silently.
inline constexpr double kSilentNormBand = 1e-6;
/// Beyond this a file is rejected even with renormalization requested.
inline constexpr double kMaxRenormalizeBand = 1e-2;

/// Throws ParseError on malformed text, ShapeError/ModeError on invalid
/// content, NormError when the norm is outside the accepted band.
FermionState<double> read_state(std::istream& in, const StateReadOptions& options = {});
FermionState<double> parse_state(std::string_view text, const StateReadOptions& options = {});

void write_state(std::ostream& out, const FermionState<double>& state);
std::string serialize_state(const FermionState<double>& state);

/// printf("%.17g"): enough digits to round-trip any double.
std::string format_real(double value);

}  // namespace fermient
