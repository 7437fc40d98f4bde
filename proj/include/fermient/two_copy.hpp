#pragma once

// Observables on two copies of the first-quantized N-particle space.
//
// Every operator built here is a linear combination of block swaps S_T,
// T a subset of the N particle slots, where S_T exchanges the slots in T
// between copy 1 and copy 2 (S_{} is the identity). Swaps on different slots
// commute and square to one, so S_T S_U = S_{T xor U} and the operators are
// stored as 2^N coefficients indexed by slot mask. Application to a vector of
// dimension d^{2N} permutes indices; the d^{2N} x d^{2N} matrix never exists.
//
// Vector layout: flat index = a * d^N + b, with a the copy-1 product index
// and b the copy-2 product index (slot 1 most significant within each copy).

#include <bit>
#include <string>
#include <vector>

#include "fermient/concurrence.hpp"
#include "fermient/fock.hpp"

namespace fermient {

/// Bit (j - 1) marks particle slot j.
using SlotMask = std::uint32_t;

template <typename Real = double>
class DoubledOperator {
 public:
  using Scalar = Complex<Real>;
  using Vector = CVector<Real>;

  DoubledOperator(SystemShape shape, std::vector<Scalar> coefficients, std::string label)
      : shape_(shape), coefficients_(std::move(coefficients)), label_(std::move(label)) {
    shape_.validate();
    if (coefficients_.size() != (std::size_t{1} << shape_.particles)) {
      throw ShapeMismatch("doubled operator needs 2^N swap coefficients");
    }
  }

  static DoubledOperator identity(SystemShape shape) {
    return block_swap(shape, 0, "I");
  }

  /// S_T for the slots in `block`.
  static DoubledOperator block_swap(SystemShape shape, SlotMask block, std::string label) {
    std::vector<Scalar> c(std::size_t{1} << shape.particles, Scalar(0));
    c.at(block) = Scalar(1);
    return DoubledOperator(shape, std::move(c), std::move(label));
  }

  const SystemShape& shape() const { return shape_; }
  const std::string& label() const { return label_; }
  const std::vector<Scalar>& coefficients() const { return coefficients_; }
  Scalar coefficient(SlotMask block) const { return coefficients_.at(block); }

  /// True when every swap coefficient is real: each S_T is Hermitian.
  bool hermitian() const {
    for (const Scalar& c : coefficients_) {
      if (c.imag() != Real(0)) return false;
    }
    return true;
  }

  /// d^{2N}.
  std::size_t dimension() const {
    const std::size_t one = shape_.first_quantized_dimension();
    return one * one;
  }

  DoubledOperator relabeled(std::string label) const {
    return DoubledOperator(shape_, coefficients_, std::move(label));
  }

  Vector apply(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dimension()) {
      throw ShapeMismatch("vector has dimension " + std::to_string(x.size()) + ", operator acts on " +
                          std::to_string(dimension()));
    }
    const std::size_t one = shape_.first_quantized_dimension();
    const int n = shape_.particles;
    const auto d = static_cast<std::size_t>(shape_.modes);

    Vector out = Vector::Zero(x.size());
    std::vector<std::size_t> part(one);
    for (SlotMask block = 0; block < coefficients_.size(); ++block) {
      const Scalar c = coefficients_[block];
      if (c == Scalar(0)) continue;
      // part[a]: contribution of the swapped slots to product index a.
      for (std::size_t a = 0; a < one; ++a) {
        std::size_t rest = a;
        std::size_t place = 1;
        std::size_t acc = 0;
        for (int slot = n; slot >= 1; --slot) {
          if (block & (SlotMask{1} << (slot - 1))) acc += (rest % d) * place;
          rest /= d;
          place *= d;
        }
        part[a] = acc;
      }
      for (std::size_t a = 0; a < one; ++a) {
        for (std::size_t b = 0; b < one; ++b) {
          const std::size_t a2 = a - part[a] + part[b];
          const std::size_t b2 = b - part[b] + part[a];
          out(static_cast<Eigen::Index>(a2 * one + b2)) +=
              c * x(static_cast<Eigen::Index>(a * one + b));
        }
      }
    }
    return out;
  }

  Vector operator*(const Vector& x) const { return apply(x); }

  friend DoubledOperator operator+(const DoubledOperator& lhs, const DoubledOperator& rhs) {
    lhs.require_same_shape(rhs);
    std::vector<Scalar> c = lhs.coefficients_;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += rhs.coefficients_[k];
    return DoubledOperator(lhs.shape_, std::move(c), lhs.label_ + " + " + rhs.label_);
  }

  friend DoubledOperator operator-(const DoubledOperator& lhs, const DoubledOperator& rhs) {
    return lhs + (Scalar(-1) * rhs).relabeled("(-" + rhs.label_ + ")");
  }

  friend DoubledOperator operator*(Scalar s, const DoubledOperator& op) {
    std::vector<Scalar> c = op.coefficients_;
    for (Scalar& v : c) v *= s;
    return DoubledOperator(op.shape_, std::move(c), format_scalar(s) + "*(" + op.label_ + ")");
  }

  friend DoubledOperator operator*(Real s, const DoubledOperator& op) { return Scalar(s) * op; }

  /// Composition: lhs applied after rhs.
  friend DoubledOperator operator*(const DoubledOperator& lhs, const DoubledOperator& rhs) {
    lhs.require_same_shape(rhs);
    std::vector<Scalar> c(lhs.coefficients_.size(), Scalar(0));
    for (std::size_t t = 0; t < c.size(); ++t) {
      if (lhs.coefficients_[t] == Scalar(0)) continue;
      for (std::size_t u = 0; u < c.size(); ++u) {
        c[t ^ u] += lhs.coefficients_[t] * rhs.coefficients_[u];
      }
    }
    return DoubledOperator(lhs.shape_, std::move(c), "(" + lhs.label_ + ")(" + rhs.label_ + ")");
  }

 private:
  void require_same_shape(const DoubledOperator& other) const {
    if (!(shape_ == other.shape_)) throw ShapeMismatch("operators act on different shapes");
  }

  static std::string format_scalar(Scalar s) {
    if (s.imag() == Real(0)) return std::to_string(static_cast<double>(s.real()));
    return "(" + std::to_string(static_cast<double>(s.real())) + "," +
           std::to_string(static_cast<double>(s.imag())) + ")";
  }

  SystemShape shape_;
  std::vector<Scalar> coefficients_;
  std::string label_;
};

/// Two copies of a state of the same shape.
template <typename Real = double>
struct CopyPair {
  FermionState<Real> first;
  FermionState<Real> second;

  CopyPair(FermionState<Real> a, FermionState<Real> b) : first(std::move(a)), second(std::move(b)) {
    if (!(first.shape() == second.shape())) throw ShapeMismatch("copies have different shapes");
  }
};

template <typename Real = double>
struct Expectation {
  /// Real part of <x|Op|x>.
  Real value = 0;
  /// Imaginary part; nonzero only through rounding for Hermitian operators.
  Real imaginary = 0;
};

enum class ProjectorSign { Plus, Minus };

namespace detail {

inline SlotMask block_mask(const SystemShape& shape, std::span<const int> block) {
  if (block.empty()) throw EmptyBlockError("slot block is empty");
  SlotMask mask = 0;
  for (int slot : block) {
    if (slot < 1 || slot > shape.particles) {
      throw RangeError("slot " + std::to_string(slot) + " outside 1.." +
                       std::to_string(shape.particles));
    }
    const SlotMask bit = SlotMask{1} << (slot - 1);
    if (mask & bit) throw RangeError("slot " + std::to_string(slot) + " repeated in block");
    mask |= bit;
  }
  return mask;
}

inline std::string block_label(std::span<const int> block) {
  std::string s;
  for (int slot : block) s += (s.empty() ? "" : ",") + std::to_string(slot);
  return "{" + s + "}";
}

inline std::vector<int> trailing_block(int n, int m) {
  std::vector<int> block;
  for (int slot = m + 1; slot <= n; ++slot) block.push_back(slot);
  return block;
}

}  // namespace detail

/// O_B: exchanges the slots in `block` between the two copies.
template <typename Real = double>
DoubledOperator<Real> swap_operator(SystemShape shape, std::span<const int> block) {
  shape.validate();
  return DoubledOperator<Real>::block_swap(shape, detail::block_mask(shape, block),
                                           "O" + detail::block_label(block));
}

/// (I + O_B) / 2
template <typename Real = double>
DoubledOperator<Real> sym_projector(SystemShape shape, std::span<const int> block) {
  const auto swap = swap_operator<Real>(shape, block);
  return (Real(0.5) * (DoubledOperator<Real>::identity(shape) + swap))
      .relabeled("P+" + detail::block_label(block));
}

/// (I - O_B) / 2
template <typename Real = double>
DoubledOperator<Real> antisym_projector(SystemShape shape, std::span<const int> block) {
  const auto swap = swap_operator<Real>(shape, block);
  return (Real(0.5) * (DoubledOperator<Real>::identity(shape) - swap))
      .relabeled("P-" + detail::block_label(block));
}

/// O^(N-M) = +2 P+ - I or -2 P- + I on an (N-M)-slot block; its expectation on
/// identical copies is Tr rho_M^2.
template <typename Real = double>
DoubledOperator<Real> observable_O_NM(SystemShape shape, int m, ProjectorSign sign,
                                      std::span<const int> block) {
  check_subsystem(shape, m);
  if (static_cast<int>(block.size()) != shape.particles - m) {
    throw RangeError("O^(N-M) block must hold N-M slots");
  }
  const auto identity = DoubledOperator<Real>::identity(shape);
  const std::string label = std::string("O^(N-M)") + (sign == ProjectorSign::Plus ? "+" : "-") +
                            detail::block_label(block);
  if (sign == ProjectorSign::Plus) {
    return (Real(2) * sym_projector<Real>(shape, block) - identity).relabeled(label);
  }
  return (Real(-2) * antisym_projector<Real>(shape, block) + identity).relabeled(label);
}

/// O^(N-M) on the canonical trailing slots M+1..N.
template <typename Real = double>
DoubledOperator<Real> observable_O_NM(SystemShape shape, int m,
                                      ProjectorSign sign = ProjectorSign::Plus) {
  check_subsystem(shape, m);
  const auto block = detail::trailing_block(shape.particles, m);
  return observable_O_NM<Real>(shape, m, sign, block);
}

/// A_f = alpha_N [(N-1) I - sum_M binomial(N,M) O^(N-M)].
template <typename Real = double>
DoubledOperator<Real> observable_Af(SystemShape shape, ProjectorSign sign = ProjectorSign::Plus,
                                    const Tolerances& tol = {}) {
  shape.validate();
  const int n = shape.particles;
  const Real a = alpha<Real>(n, shape.modes, tol.invariant);
  auto sum = Real(n - 1) * DoubledOperator<Real>::identity(shape);
  for (int m = 1; m <= n - 1; ++m) {
    sum = sum - static_cast<Real>(binomial(n, m)) * observable_O_NM<Real>(shape, m, sign);
  }
  return (a * sum).relabeled("A_f");
}

/// Sign patterns (+1/-1 per slot) with an even, nonzero number of minuses.
inline std::vector<std::vector<int>> a_sign_patterns(int n) {
  std::vector<std::vector<int>> patterns;
  for (SlotMask minus = 1; minus < (SlotMask{1} << n); ++minus) {
    if (std::popcount(minus) % 2 != 0) continue;
    std::vector<int> pattern(static_cast<std::size_t>(n), +1);
    for (int j = 0; j < n; ++j) {
      if (minus & (SlotMask{1} << j)) pattern[static_cast<std::size_t>(j)] = -1;
    }
    patterns.push_back(std::move(pattern));
  }
  return patterns;
}

namespace detail {

template <typename Real>
DoubledOperator<Real> per_slot_projector(SystemShape shape, int slot, int sign) {
  const int block[] = {slot};
  return sign > 0 ? sym_projector<Real>(shape, block) : antisym_projector<Real>(shape, block);
}

}  // namespace detail

/// A = 4 sum over admissible sign patterns of P^1_{s1} (x) ... (x) P^N_{sN}.
template <typename Real = double>
DoubledOperator<Real> observable_A(SystemShape shape) {
  shape.validate();
  const int n = shape.particles;
  if (n < 2) throw ShapeError("observable A needs N >= 2");
  std::vector<Complex<Real>> zero(std::size_t{1} << n, Complex<Real>(0));
  DoubledOperator<Real> sum(shape, std::move(zero), "0");
  for (const auto& pattern : a_sign_patterns(n)) {
    auto term = DoubledOperator<Real>::identity(shape);
    for (int slot = 1; slot <= n; ++slot) {
      term = term * detail::per_slot_projector<Real>(shape, slot,
                                                    pattern[static_cast<std::size_t>(slot - 1)]);
    }
    sum = sum + term;
  }
  return (Real(4) * sum).relabeled("A");
}

/// A~ = 4 (I - P+^1 (x) ... (x) P+^N).
template <typename Real = double>
DoubledOperator<Real> observable_A_tilde(SystemShape shape) {
  shape.validate();
  const int n = shape.particles;
  if (n < 2) throw ShapeError("observable A~ needs N >= 2");
  auto product = DoubledOperator<Real>::identity(shape);
  for (int slot = 1; slot <= n; ++slot) {
    product = product * detail::per_slot_projector<Real>(shape, slot, +1);
  }
  return (Real(4) * (DoubledOperator<Real>::identity(shape) - product)).relabeled("A~");
}

/// A'_f = alpha_N (1 + N - 2^N + 2^(N-2) A).
template <typename Real = double>
DoubledOperator<Real> observable_Af_prime(SystemShape shape, const Tolerances& tol = {}) {
  shape.validate();
  const int n = shape.particles;
  const Real a = alpha<Real>(n, shape.modes, tol.invariant);
  const Real offset = Real(1 + n) - std::ldexp(Real(1), n);
  const auto op = offset * DoubledOperator<Real>::identity(shape) +
                  std::ldexp(Real(1), n - 2) * observable_A<Real>(shape);
  return (a * op).relabeled("A'_f");
}

/// |psi1> (x) |psi2> in the doubled first-quantized space.
template <typename Real>
CVector<Real> product_vector(const CopyPair<Real>& pair) {
  const auto one = embed_first_quantized(pair.first).entries();
  const auto two = embed_first_quantized(pair.second).entries();
  CVector<Real> x(one.size() * two.size());
  for (Eigen::Index a = 0; a < one.size(); ++a) {
    x.segment(a * two.size(), two.size()) = one(a) * two;
  }
  return x;
}

/// <x|Op|x> for x = psi1 (x) psi2, evaluated by applying Op to x.
template <typename Real>
Expectation<Real> expectation(const DoubledOperator<Real>& op, const CopyPair<Real>& pair) {
  if (!(op.shape() == pair.first.shape())) {
    throw ShapeMismatch("operator and copies have different shapes");
  }
  const CVector<Real> x = product_vector(pair);
  const Complex<Real> v = x.dot(op.apply(x));
  return {v.real(), v.imag()};
}

/// Expectation on two identical copies of `state`.
template <typename Real>
Expectation<Real> expectation(const DoubledOperator<Real>& op, const FermionState<Real>& state) {
  return expectation(op, CopyPair<Real>(state, state));
}

}  // namespace fermient
