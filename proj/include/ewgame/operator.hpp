#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ewgame {

using Complex = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest supported Hilbert-space dimension (three qubits).
inline constexpr int kMaxDim = 8;

/// Dense square complex matrix of dimension 2, 4 or 8, stored row-major.
///
/// Fixed inline storage keeps the type a plain value: copies are cheap
/// enough at d <= 8 and no allocation happens in the sampling loops.
class Operator {
 public:
  Operator() : Operator(2) {}

  explicit Operator(int dim) : dim_(dim) {
    if (dim != 2 && dim != 4 && dim != 8) {
      throw Error("operator dimension must be 2, 4 or 8, got " + std::to_string(dim));
    }
    data_.fill(Complex{0.0, 0.0});
  }

  static Operator identity(int dim) {
    Operator op(dim);
    for (int i = 0; i < dim; ++i) op(i, i) = 1.0;
    return op;
  }

  /// Builds an operator from a row-major list of d*d entries.
  template <typename Range>
  static Operator from_entries(int dim, const Range& entries) {
    Operator op(dim);
    std::size_t k = 0;
    for (const auto& e : entries) {
      if (k >= static_cast<std::size_t>(dim * dim)) throw Error("too many matrix entries");
      Complex c(e);
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw Error("matrix entry " + std::to_string(k) + " is not finite");
      }
      op.data_[k++] = c;
    }
    if (k != static_cast<std::size_t>(dim * dim)) {
      throw Error("expected " + std::to_string(dim * dim) + " matrix entries, got " + std::to_string(k));
    }
    return op;
  }

  int dim() const { return dim_; }
  int qubits() const { return dim_ == 2 ? 1 : dim_ == 4 ? 2 : 3; }

  Complex& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * dim_ + c)]; }
  const Complex& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * dim_ + c)]; }

  Complex trace() const {
    Complex t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  Operator adjoint() const {
    Operator out(dim_);
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) out(r, c) = std::conj((*this)(c, r));
    return out;
  }

  Operator& operator+=(const Operator& o) {
    require_same_dim(o);
    for (int k = 0; k < dim_ * dim_; ++k) data_[k] += o.data_[k];
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    require_same_dim(o);
    for (int k = 0; k < dim_ * dim_; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Operator& operator*=(Complex s) {
    for (int k = 0; k < dim_ * dim_; ++k) data_[k] *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator-(Operator a) { return a *= -1.0; }

  friend Operator operator*(const Operator& a, const Operator& b) {
    a.require_same_dim(b);
    const int d = a.dim_;
    Operator out(d);
    for (int r = 0; r < d; ++r)
      for (int k = 0; k < d; ++k) {
        const Complex ark = a(r, k);
        if (ark == Complex{}) continue;
        for (int c = 0; c < d; ++c) out(r, c) += ark * b(k, c);
      }
    return out;
  }

  /// Largest entrywise modulus of (a - b).
  friend double max_abs_diff(const Operator& a, const Operator& b) {
    a.require_same_dim(b);
    double m = 0.0;
    for (int k = 0; k < a.dim_ * a.dim_; ++k) m = std::max(m, std::abs(a.data_[k] - b.data_[k]));
    return m;
  }

  /// max |M - M^dagger| entrywise.
  double hermiticity_defect() const {
    double m = 0.0;
    for (int r = 0; r < dim_; ++r)
      for (int c = r; c < dim_; ++c) m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return m;
  }

  bool is_hermitian(double tol = 1e-10) const { return hermiticity_defect() <= tol; }

  bool all_finite() const {
    for (int k = 0; k < dim_ * dim_; ++k)
      if (!std::isfinite(data_[k].real()) || !std::isfinite(data_[k].imag())) return false;
    return true;
  }

  bool operator==(const Operator& o) const {
    return dim_ == o.dim_ && std::equal(data_.begin(), data_.begin() + dim_ * dim_, o.data_.begin());
  }

  void require_same_dim(const Operator& o) const {
    if (dim_ != o.dim_) {
      throw Error("dimension mismatch: " + std::to_string(dim_) + " vs " + std::to_string(o.dim_));
    }
  }

 private:
  int dim_;
  std::array<Complex, kMaxDim * kMaxDim> data_;
};

/// Tr(a b) in O(d^2).
inline Complex trace_product(const Operator& a, const Operator& b) {
  a.require_same_dim(b);
  Complex t = 0.0;
  const int d = a.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t += a(i, j) * b(j, i);
  return t;
}

inline Operator kron(const Operator& a, const Operator& b) {
  const int d = a.dim() * b.dim();
  Operator out(d);
  for (int ra = 0; ra < a.dim(); ++ra)
    for (int ca = 0; ca < a.dim(); ++ca) {
      const Complex x = a(ra, ca);
      if (x == Complex{}) continue;
      for (int rb = 0; rb < b.dim(); ++rb)
        for (int cb = 0; cb < b.dim(); ++cb) out(ra * b.dim() + rb, ca * b.dim() + cb) = x * b(rb, cb);
    }
  return out;
}

/// |v><v| for a column vector given as d amplitudes.
template <typename Range>
Operator outer(int dim, const Range& amplitudes) {
  std::array<Complex, kMaxDim> v{};
  int k = 0;
  for (const auto& a : amplitudes) {
    if (k >= dim) throw Error("too many amplitudes");
    v[static_cast<std::size_t>(k++)] = Complex(a);
  }
  if (k != dim) throw Error("expected " + std::to_string(dim) + " amplitudes");
  Operator out(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) out(r, c) = v[r] * std::conj(v[c]);
  return out;
}

}  // namespace ewgame
