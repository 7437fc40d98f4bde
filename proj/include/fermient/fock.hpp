#pragma once

// Fock-space building blocks for N identical fermions on d modes: the
// lexicographic occupation basis, pure states over it, the antisymmetric
// tensor and first-quantized representations, and single-particle basis
// changes.
//
// Conventions used throughout the library:
//  * modes are labelled 1..d in every public API and file;
//  * the amplitude stored for an ascending tuple (i1 < ... < iN) is the
//    coefficient of f+_{i1} ... f+_{iN} |0> with operators applied in that
//    ascending order;
//  * first-quantized vectors live in (C^d)^{(x)N} with slot 1 the most
//    significant digit of the flat index.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fermient/combinatorics.hpp"
#include "fermient/errors.hpp"

namespace fermient {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Accumulator type one step wider than Real, used where cancellation near
/// the separable boundary would otherwise eat the last digits.
template <typename Real>
using wide_t = std::conditional_t<(sizeof(Real) < sizeof(long double)), long double, Real>;

/// d modes, N particles.
struct SystemShape {
  static constexpr int kMaxModes = 127;

  int modes = 0;
  int particles = 0;

  /// Throws ShapeError unless 1 <= N <= d <= kMaxModes.
  void validate() const {
    if (particles < 1 || particles > modes) {
      throw ShapeError("invalid shape: need 1 <= N <= d, got d=" + std::to_string(modes) +
                       " N=" + std::to_string(particles));
    }
    if (modes > kMaxModes) {
      throw ShapeError("invalid shape: d=" + std::to_string(modes) + " exceeds " +
                       std::to_string(kMaxModes) + " modes");
    }
  }

  /// binomial(d, N): size of the occupation basis.
  std::size_t dimension() const { return static_cast<std::size_t>(binomial(modes, particles)); }

  /// d^N: size of the first-quantized product space.
  std::size_t first_quantized_dimension() const {
    std::size_t dim = 1;
    for (int k = 0; k < particles; ++k) dim *= static_cast<std::size_t>(modes);
    return dim;
  }

  friend bool operator==(const SystemShape&, const SystemShape&) = default;
};

inline SystemShape make_shape(int d, int n) {
  SystemShape shape{d, n};
  shape.validate();
  return shape;
}

/// Lexicographically ordered strictly-increasing N-tuples over {1..d}.
class OccupationBasis {
 public:
  explicit OccupationBasis(SystemShape shape) : shape_(shape) {
    shape_.validate();
    const int n = shape_.particles;
    const int d = shape_.modes;
    const std::size_t count = shape_.dimension();
    tuples_.reserve(count * static_cast<std::size_t>(n));
    masks_.reserve(count);

    std::vector<int> current(static_cast<std::size_t>(n));
    std::iota(current.begin(), current.end(), 1);
    while (true) {
      tuples_.insert(tuples_.end(), current.begin(), current.end());
      masks_.push_back(modes_to_mask(current));
      // Advance to the next combination in lexicographic order.
      int pos = n - 1;
      while (pos >= 0 && current[static_cast<std::size_t>(pos)] == d - n + pos + 1) --pos;
      if (pos < 0) break;
      ++current[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < n; ++j) {
        current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }

  const SystemShape& shape() const { return shape_; }
  std::size_t size() const { return masks_.size(); }

  std::span<const int> tuple(std::size_t rank) const {
    const auto n = static_cast<std::size_t>(shape_.particles);
    return {tuples_.data() + rank * n, n};
  }

  ModeMask mask(std::size_t rank) const { return masks_[rank]; }

  /// Rank of an ascending tuple. ModeError unless strictly increasing in range.
  std::size_t rank(std::span<const int> modes) const {
    if (static_cast<int>(modes.size()) != shape_.particles) {
      throw ModeError("tuple has " + std::to_string(modes.size()) + " modes, expected " +
                      std::to_string(shape_.particles));
    }
    for (std::size_t j = 0; j < modes.size(); ++j) {
      if (modes[j] < 1 || modes[j] > shape_.modes) {
        throw ModeError("mode " + std::to_string(modes[j]) + " outside 1.." +
                        std::to_string(shape_.modes));
      }
      if (j > 0 && modes[j] <= modes[j - 1]) {
        throw ModeError("tuple is not strictly increasing");
      }
    }
    return lex_rank(modes);
  }

  /// Rank of the tuple whose modes are the set bits of `mask`.
  std::size_t rank_of_mask(ModeMask mask) const {
    const auto modes = mask_to_modes(mask);
    return rank(modes);
  }

 private:
  std::size_t lex_rank(std::span<const int> modes) const {
    const int d = shape_.modes;
    const int n = shape_.particles;
    std::uint64_t r = 0;
    int previous = 0;
    for (int j = 0; j < n; ++j) {
      const int c = modes[static_cast<std::size_t>(j)];
      for (int v = previous + 1; v < c; ++v) r += binomial(d - v, n - j - 1);
      previous = c;
    }
    return static_cast<std::size_t>(r);
  }

  SystemShape shape_;
  std::vector<int> tuples_;
  std::vector<ModeMask> masks_;
};

inline OccupationBasis enumerate_basis(SystemShape shape) { return OccupationBasis(shape); }

/// Pure N-fermion state: unit-norm amplitudes indexed by OccupationBasis rank.
template <typename Real = double>
class FermionState {
 public:
  using Scalar = Complex<Real>;
  using Vector = CVector<Real>;

  /// Throws NormError when | ||a|| - 1 | exceeds `tol`.
  FermionState(SystemShape shape, Vector amplitudes, double tol = 1e-10)
      : shape_(shape), amplitudes_(std::move(amplitudes)) {
    shape_.validate();
    if (static_cast<std::size_t>(amplitudes_.size()) != shape_.dimension()) {
      throw ShapeError("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                       ", expected binomial(d,N) = " + std::to_string(shape_.dimension()));
    }
    const Real norm = amplitudes_.norm();
    if (!(std::abs(norm - Real(1)) <= static_cast<Real>(tol))) {
      throw NormError("state norm " + std::to_string(static_cast<double>(norm)) + " is not 1");
    }
  }

  /// Rescales a nonzero vector to unit norm.
  static FermionState normalized(SystemShape shape, Vector amplitudes) {
    const Real norm = amplitudes.norm();
    if (!(norm > Real(0)) || !std::isfinite(static_cast<double>(norm))) {
      throw NormError("cannot normalize a zero or non-finite amplitude vector");
    }
    amplitudes /= norm;
    return FermionState(shape, std::move(amplitudes));
  }

  const SystemShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return amplitudes_; }

  /// Amplitude of an ascending mode tuple.
  Scalar amplitude(std::span<const int> modes) const {
    return amplitudes_(static_cast<Eigen::Index>(OccupationBasis(shape_).rank(modes)));
  }

  template <typename Other>
  FermionState<Other> cast() const {
    return FermionState<Other>(shape_, amplitudes_.template cast<Complex<Other>>(), 1e-6);
  }

 private:
  SystemShape shape_;
  Vector amplitudes_;
};

namespace detail {

inline std::size_t product_index(std::span<const int> modes, int d) {
  std::size_t index = 0;
  for (int m : modes) index = index * static_cast<std::size_t>(d) + static_cast<std::size_t>(m - 1);
  return index;
}

/// Calls fn(permuted_modes, sign) for each of the N! orderings of `sorted`.
template <typename Fn>
void for_each_signed_permutation(std::span<const int> sorted, Fn&& fn) {
  std::vector<int> order(sorted.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> permuted(sorted.size());
  do {
    for (std::size_t k = 0; k < order.size(); ++k) {
      permuted[k] = sorted[static_cast<std::size_t>(order[k])];
    }
    fn(std::span<const int>(permuted), sort_parity(order));
  } while (std::next_permutation(order.begin(), order.end()));
}

}  // namespace detail

/// Fully antisymmetric tensor omega with N indices in {1..d}, stored densely
/// over the d^N product index. Normalized so that sum |omega|^2 = 1/N!.
template <typename Real = double>
class AntisymTensor {
 public:
  using Scalar = Complex<Real>;
  using Vector = CVector<Real>;

  AntisymTensor(SystemShape shape, Vector entries) : shape_(shape), entries_(std::move(entries)) {
    shape_.validate();
    if (static_cast<std::size_t>(entries_.size()) != shape_.first_quantized_dimension()) {
      throw ShapeError("tensor has " + std::to_string(entries_.size()) + " entries, expected d^N");
    }
  }

  /// Zero tensor of the given shape.
  explicit AntisymTensor(SystemShape shape)
      : AntisymTensor(shape, Vector::Zero(static_cast<Eigen::Index>(shape.first_quantized_dimension()))) {}

  const SystemShape& shape() const { return shape_; }
  const Vector& entries() const { return entries_; }

  Scalar operator()(std::span<const int> indices) const {
    return entries_(static_cast<Eigen::Index>(detail::product_index(indices, shape_.modes)));
  }
  Scalar& operator()(std::span<const int> indices) {
    return entries_(static_cast<Eigen::Index>(detail::product_index(indices, shape_.modes)));
  }
  Scalar operator()(std::initializer_list<int> indices) const {
    return (*this)(std::span<const int>(indices.begin(), indices.size()));
  }
  Scalar& operator()(std::initializer_list<int> indices) {
    return (*this)(std::span<const int>(indices.begin(), indices.size()));
  }

  /// Largest deviation from exact antisymmetry over all index tuples.
  Real antisymmetry_defect() const {
    const int n = shape_.particles;
    const int d = shape_.modes;
    Real worst = 0;
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (std::size_t flat = 0; flat < shape_.first_quantized_dimension(); ++flat) {
      std::size_t rest = flat;
      for (int k = n - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(d)) + 1;
        rest /= static_cast<std::size_t>(d);
      }
      const int parity = sort_parity(idx);
      const Scalar value = entries_(static_cast<Eigen::Index>(flat));
      if (parity == 0) {
        worst = std::max(worst, std::abs(value));
        continue;
      }
      std::vector<int> sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      const Scalar reference = (*this)(std::span<const int>(sorted));
      worst = std::max(worst, std::abs(value - Real(parity) * reference));
    }
    return worst;
  }

 private:
  SystemShape shape_;
  Vector entries_;
};

/// Antisymmetric vector in the N-fold tensor power of C^d.
template <typename Real = double>
class FirstQuantizedVector {
 public:
  using Vector = CVector<Real>;

  FirstQuantizedVector(SystemShape shape, Vector entries)
      : shape_(shape), entries_(std::move(entries)) {
    shape_.validate();
    if (static_cast<std::size_t>(entries_.size()) != shape_.first_quantized_dimension()) {
      throw ShapeError("first-quantized vector must have d^N entries");
    }
  }

  const SystemShape& shape() const { return shape_; }
  const Vector& entries() const { return entries_; }

  std::size_t index(std::span<const int> modes) const {
    return detail::product_index(modes, shape_.modes);
  }

  /// Copy with particle slots `a` and `b` (1-based) exchanged.
  FirstQuantizedVector swap_slots(int a, int b) const {
    const int n = shape_.particles;
    if (a < 1 || b < 1 || a > n || b > n) throw RangeError("slot index out of range");
    const auto d = static_cast<std::size_t>(shape_.modes);
    Vector out(entries_.size());
    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    for (std::size_t flat = 0; flat < static_cast<std::size_t>(entries_.size()); ++flat) {
      std::size_t rest = flat;
      for (int k = n - 1; k >= 0; --k) {
        digits[static_cast<std::size_t>(k)] = rest % d;
        rest /= d;
      }
      std::swap(digits[static_cast<std::size_t>(a - 1)], digits[static_cast<std::size_t>(b - 1)]);
      std::size_t target = 0;
      for (std::size_t digit : digits) target = target * d + digit;
      out(static_cast<Eigen::Index>(target)) = entries_(static_cast<Eigen::Index>(flat));
    }
    return FirstQuantizedVector(shape_, std::move(out));
  }

 private:
  SystemShape shape_;
  Vector entries_;
};

/// Slater determinant f+_{m1} ... f+_{mN} |0> for modes in the given order.
/// The stored amplitude is the sign of the permutation sorting `modes`.
template <typename Real = double>
FermionState<Real> slater_state(SystemShape shape, std::span<const int> modes) {
  shape.validate();
  if (static_cast<int>(modes.size()) != shape.particles) {
    throw ModeError("expected " + std::to_string(shape.particles) + " modes, got " +
                    std::to_string(modes.size()));
  }
  for (int m : modes) {
    if (m < 1 || m > shape.modes) {
      throw ModeError("mode " + std::to_string(m) + " outside 1.." + std::to_string(shape.modes));
    }
  }
  const int parity = sort_parity(modes);
  if (parity == 0) throw ModeError("repeated mode in Slater determinant");

  std::vector<int> sorted(modes.begin(), modes.end());
  std::sort(sorted.begin(), sorted.end());
  const OccupationBasis basis(shape);
  CVector<Real> amplitudes = CVector<Real>::Zero(static_cast<Eigen::Index>(basis.size()));
  amplitudes(static_cast<Eigen::Index>(basis.rank(sorted))) = Complex<Real>(Real(parity), 0);
  return FermionState<Real>(shape, std::move(amplitudes));
}

/// Convenience overload: N is the number of modes given.
template <typename Real = double>
FermionState<Real> slater_state(int d, std::initializer_list<int> modes) {
  return slater_state<Real>(make_shape(d, static_cast<int>(modes.size())),
                            std::span<const int>(modes.begin(), modes.size()));
}

/// omega(ordered) = a(ordered) / N!, extended antisymmetrically.
template <typename Real>
AntisymTensor<Real> to_antisym_tensor(const FermionState<Real>& state) {
  const SystemShape& shape = state.shape();
  const OccupationBasis basis(shape);
  const Real scale = Real(1) / static_cast<Real>(factorial(shape.particles));
  AntisymTensor<Real> tensor(shape);
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Complex<Real> a = state.amplitudes()(static_cast<Eigen::Index>(r));
    if (a == Complex<Real>(0)) continue;
    detail::for_each_signed_permutation(basis.tuple(r), [&](std::span<const int> perm, int sign) {
      tensor(perm) = Real(sign) * scale * a;
    });
  }
  return tensor;
}

/// a(ordered) = N! * omega(ordered). Validates antisymmetry and the 1/N! norm.
template <typename Real>
FermionState<Real> from_antisym_tensor(const AntisymTensor<Real>& tensor, double tol = 1e-10) {
  const SystemShape& shape = tensor.shape();
  if (tensor.antisymmetry_defect() > static_cast<Real>(tol)) {
    throw AntisymmetryError("tensor is not antisymmetric within tolerance");
  }
  const Real nfact = static_cast<Real>(factorial(shape.particles));
  const Real total = tensor.entries().squaredNorm();
  if (!(std::abs(total - Real(1) / nfact) <= static_cast<Real>(tol))) {
    throw NormError("tensor normalization sum |omega|^2 must equal 1/N!");
  }
  const OccupationBasis basis(shape);
  CVector<Real> amplitudes(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < basis.size(); ++r) {
    amplitudes(static_cast<Eigen::Index>(r)) = nfact * tensor(basis.tuple(r));
  }
  return FermionState<Real>(shape, std::move(amplitudes), tol);
}

/// Each occupied tuple contributes a/sqrt(N!) * sum_P sign(P) |P(tuple)>.
template <typename Real>
FirstQuantizedVector<Real> embed_first_quantized(const FermionState<Real>& state) {
  const SystemShape& shape = state.shape();
  const OccupationBasis basis(shape);
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(factorial(shape.particles)));
  CVector<Real> out = CVector<Real>::Zero(static_cast<Eigen::Index>(shape.first_quantized_dimension()));
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Complex<Real> a = state.amplitudes()(static_cast<Eigen::Index>(r));
    if (a == Complex<Real>(0)) continue;
    detail::for_each_signed_permutation(basis.tuple(r), [&](std::span<const int> perm, int sign) {
      out(static_cast<Eigen::Index>(detail::product_index(perm, shape.modes))) +=
          Real(sign) * scale * a;
    });
  }
  return FirstQuantizedVector<Real>(shape, std::move(out));
}

namespace detail {

/// det of the N x N minor with the given 1-based rows and 0-based columns.
template <typename Real, typename Derived>
Complex<Real> minor_determinant(const Eigen::MatrixBase<Derived>& m, std::span<const int> rows,
                                std::span<const int> cols) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix<Real> sub(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      sub(i, j) = m(rows[static_cast<std::size_t>(i)] - 1, cols[static_cast<std::size_t>(j)]);
    }
  }
  return sub.determinant();
}

}  // namespace detail

/// Slater determinant built from N orbitals given as the columns of a d x N
/// matrix: amplitude at J is det(orbitals[J, :]).
template <typename Real>
FermionState<Real> slater_from_orbitals(SystemShape shape, const CMatrix<Real>& orbitals) {
  shape.validate();
  if (orbitals.rows() != shape.modes || orbitals.cols() != shape.particles) {
    throw ShapeError("orbital matrix must be d x N");
  }
  const OccupationBasis basis(shape);
  std::vector<int> cols(static_cast<std::size_t>(shape.particles));
  std::iota(cols.begin(), cols.end(), 0);
  CVector<Real> amplitudes(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < basis.size(); ++r) {
    amplitudes(static_cast<Eigen::Index>(r)) =
        detail::minor_determinant<Real>(orbitals, basis.tuple(r), cols);
  }
  return FermionState<Real>::normalized(shape, std::move(amplitudes));
}

/// Applies f+_i -> sum_j U(j,i) f+_j to every creation operator:
/// a'(J) = sum_I a(I) det(U[J, I]).
template <typename Real>
FermionState<Real> apply_mode_unitary(const FermionState<Real>& state, const CMatrix<Real>& unitary,
                                      double tol = 1e-10) {
  const SystemShape& shape = state.shape();
  const auto d = static_cast<Eigen::Index>(shape.modes);
  if (unitary.rows() != d || unitary.cols() != d) {
    throw UnitarityError("mode unitary must be d x d");
  }
  const CMatrix<Real> gram = unitary.adjoint() * unitary - CMatrix<Real>::Identity(d, d);
  if (gram.cwiseAbs().maxCoeff() > static_cast<Real>(tol)) {
    throw UnitarityError("matrix is not unitary within tolerance");
  }

  const OccupationBasis basis(shape);
  CVector<Real> out = CVector<Real>::Zero(static_cast<Eigen::Index>(basis.size()));
  std::vector<int> cols(static_cast<std::size_t>(shape.particles));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Complex<Real> a = state.amplitudes()(static_cast<Eigen::Index>(i));
    if (a == Complex<Real>(0)) continue;
    const auto tuple_i = basis.tuple(i);
    for (std::size_t k = 0; k < cols.size(); ++k) cols[k] = tuple_i[k] - 1;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      out(static_cast<Eigen::Index>(j)) +=
          a * detail::minor_determinant<Real>(unitary, basis.tuple(j), cols);
    }
  }
  return FermionState<Real>(shape, std::move(out), tol);
}

}  // namespace fermient
