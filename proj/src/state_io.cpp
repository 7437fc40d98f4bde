#include "fermient/state_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <set>
#include <sstream>
#include <vector>

namespace fermient {

namespace {

struct LineReader {
  std::istream& in;
  int line_number = 0;

  /// Next line that is neither blank nor a comment.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_number;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_number) + ": " + what);
  }
};

double parse_double(const std::string& token, const LineReader& reader) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE ||
      !std::isfinite(value)) {
    reader.fail("invalid real number '" + token + "'");
  }
  return value;
}

int parse_int(const std::string& token, const LineReader& reader) {
  errno = 0;
  char* end = nullptr;
  const long value = std::strtol(token.c_str(), &end, 10);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE || value < -1000000 ||
      value > 1000000) {
    reader.fail("invalid integer '" + token + "'");
  }
  return static_cast<int>(value);
}

int parse_header_field(LineReader& reader, const std::string& key) {
  std::string line;
  if (!reader.next(line)) reader.fail("missing '" + key + "' line");
  std::istringstream fields(line);
  std::string name;
  std::string value;
  std::string extra;
  fields >> name >> value;
  if (name != key || value.empty() || (fields >> extra)) {
    reader.fail("expected '" + key + " <integer>'");
  }
  return parse_int(value, reader);
}

}  // namespace

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

FermionState<double> read_state(std::istream& in, const StateReadOptions& options) {
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) reader.fail("empty state file");
  if (line != kStateFormatTag) {
    reader.fail("expected format tag '" + std::string(kStateFormatTag) + "', got '" + line + "'");
  }
  const int d = parse_header_field(reader, "d");
  const int n = parse_header_field(reader, "n");
  const SystemShape shape = make_shape(d, n);
  const OccupationBasis basis(shape);

  CVector<double> amplitudes = CVector<double>::Zero(static_cast<Eigen::Index>(basis.size()));
  std::set<std::size_t> seen;
  while (reader.next(line)) {
    std::istringstream fields(line);
    std::string modes_token;
    std::string re_token;
    std::string im_token;
    std::string extra;
    fields >> modes_token >> re_token >> im_token;
    if (im_token.empty() || (fields >> extra)) reader.fail("expected '<modes> <re> <im>'");

    std::vector<int> modes;
    std::stringstream mode_stream(modes_token);
    std::string mode;
    while (std::getline(mode_stream, mode, ',')) modes.push_back(parse_int(mode, reader));
    std::size_t rank = 0;
    try {
      rank = basis.rank(modes);
    } catch (const ModeError& e) {
      throw ModeError("line " + std::to_string(reader.line_number) + ": " + e.what());
    }
    if (!seen.insert(rank).second) reader.fail("duplicate tuple " + modes_token);
    amplitudes(static_cast<Eigen::Index>(rank)) =
        Complex<double>(parse_double(re_token, reader), parse_double(im_token, reader));
  }

  const double deviation = std::abs(amplitudes.norm() - 1.0);
  if (deviation <= 1e-10) return FermionState<double>(shape, std::move(amplitudes));
  if (deviation <= kSilentNormBand || (options.renormalize && deviation <= kMaxRenormalizeBand)) {
    return FermionState<double>::normalized(shape, std::move(amplitudes));
  }
  throw NormError("state norm " + format_real(amplitudes.norm()) + " deviates from 1 by " +
                  format_real(deviation) +
                  (deviation <= kMaxRenormalizeBand ? " (use --renormalize)" : ""));
}

FermionState<double> parse_state(std::string_view text, const StateReadOptions& options) {
  std::istringstream in{std::string(text)};
  return read_state(in, options);
}

void write_state(std::ostream& out, const FermionState<double>& state) {
  const OccupationBasis basis(state.shape());
  out << kStateFormatTag << '\n';
  out << "d " << state.shape().modes << '\n';
  out << "n " << state.shape().particles << '\n';
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Complex<double> a = state.amplitudes()(static_cast<Eigen::Index>(r));
    if (a == Complex<double>(0.0)) continue;
    std::string modes;
    for (int m : basis.tuple(r)) modes += (modes.empty() ? "" : ",") + std::to_string(m);
    out << modes << ' ' << format_real(a.real()) << ' ' << format_real(a.imag()) << '\n';
  }
}

std::string serialize_state(const FermionState<double>& state) {
  std::ostringstream out;
  write_state(out, state);
  return out.str();
}

}  // namespace fermient
