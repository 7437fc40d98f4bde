#pragma once

#include <stdexcept>
#include <string>

namespace fermient {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid (d, N) pair: N outside [1, d], or d beyond the 127-mode limit.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Repeated or out-of-range mode labels.
class ModeError : public Error {
 public:
  using Error::Error;
};

class AntisymmetryError : public Error {
 public:
  using Error::Error;
};

class NormError : public Error {
 public:
  using Error::Error;
};

class UnitarityError : public Error {
 public:
  using Error::Error;
};

/// Subsystem size M outside [1, N-1], or an out-of-range slot index.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// alpha_N diverges (e.g. d == N, where the only state is one determinant).
class DegenerateShapeError : public Error {
 public:
  using Error::Error;
};

/// A purity left the interval the theory allows. Always a bug upstream.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

class EmptyBlockError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

/// Malformed state file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fermient
