#pragma once

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ewgame/eigen.hpp"
#include "ewgame/operator.hpp"
#include "ewgame/pauli.hpp"

namespace ewgame {

using Rng = std::mt19937_64;

namespace tol {
inline constexpr double kValidation = 1e-10;
inline constexpr double kEigenResidual = 1e-9;
inline constexpr double kRoundTrip = 1e-12;
}  // namespace tol

/// Hermitian, unit-trace, positive-semidefinite operator.
///
/// Construction validates at 1e-10. Eigenvalues in [-1e-10, 0) are clamped to
/// zero by rebuilding from the eigenbasis; anything more negative is rejected.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Operator& op) : op_(op) {
    if (!op.all_finite()) throw Error("density matrix has non-finite entries");
    const double defect = op.hermiticity_defect();
    if (defect > tol::kValidation) {
      throw Error("density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    const Complex tr = op.trace();
    if (std::abs(tr - 1.0) > tol::kValidation) {
      throw Error("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    const EigenSystem es = hermitian_eigensystem(op);
    const double min_eig = es.values.front();
    if (min_eig < -tol::kValidation) {
      throw Error("density matrix has negative eigenvalue " + std::to_string(min_eig));
    }
    if (min_eig < 0.0) op_ = es.rebuild([](double l) { return l < 0.0 ? 0.0 : l; });
  }

  const Operator& op() const { return op_; }
  int dim() const { return op_.dim(); }
  int qubits() const { return op_.qubits(); }
  double purity() const { return trace_product(op_, op_).real(); }

 private:
  Operator op_;
};

inline CorrelationTable pauli_coefficients(const DensityMatrix& rho) { return pauli_expectations(rho.op()); }

inline DensityMatrix maximally_mixed(int dim) { return DensityMatrix(Operator::identity(dim) * Complex(1.0 / dim)); }

inline const Operator& bell_psi_plus_projector() {
  static const Operator p = [] {
    const double h = 1.0 / std::sqrt(2.0);
    return outer(4, std::array<double, 4>{h, 0.0, 0.0, h});
  }();
  return p;
}

inline DensityMatrix bell_psi_plus() { return DensityMatrix(bell_psi_plus_projector()); }

/// (1 - z)/4 I + z |psi+><psi+|
inline DensityMatrix make_werner(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw Error("Werner parameter must lie in [0, 1], got " + std::to_string(z));
  return DensityMatrix(Operator::identity(4) * Complex((1.0 - z) / 4.0) + bell_psi_plus_projector() * Complex(z));
}

/// Pure product state |bits> in the computational basis, e.g. "01".
inline DensityMatrix computational_state(const std::string& bits) {
  const int n = static_cast<int>(bits.size());
  if (n < 1 || n > kMaxQubits) throw Error("computational state needs 1..3 bits");
  int idx = 0;
  for (char b : bits) {
    if (b != '0' && b != '1') throw Error("computational state bits must be 0 or 1");
    idx = idx * 2 + (b - '0');
  }
  Operator op(1 << n);
  op(idx, idx) = 1.0;
  return DensityMatrix(op);
}

/// Transpose on one qubit of a two-qubit operator; subsystem 0 is A, 1 is B.
inline Operator partial_transpose(const Operator& op, int subsystem = 1) {
  if (op.dim() != 4) throw Error("partial transpose requires a two-qubit (4x4) operator");
  if (subsystem != 0 && subsystem != 1) throw Error("subsystem must be 0 (A) or 1 (B)");
  Operator out(4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) {
          const int r = a * 2 + b, c = a2 * 2 + b2;
          const int tr = subsystem == 1 ? a * 2 + b2 : a2 * 2 + b;
          const int tc = subsystem == 1 ? a2 * 2 + b : a * 2 + b2;
          out(tr, tc) = op(r, c);
        }
  return out;
}
inline Operator partial_transpose(const DensityMatrix& rho, int subsystem = 1) {
  return partial_transpose(rho.op(), subsystem);
}

/// Smallest eigenvalue of rho^{T_B}; negative iff the two-qubit state is entangled.
inline double min_partial_transpose_eigenvalue(const DensityMatrix& rho) {
  return hermitian_eigenvalues(partial_transpose(rho)).front();
}

inline bool is_ppt(const DensityMatrix& rho, double tol = 1e-9) { return min_partial_transpose_eigenvalue(rho) >= -tol; }

inline double trace_distance(const Operator& a, const Operator& b) {
  a.require_same_dim(b);
  double s = 0.0;
  for (double l : hermitian_eigenvalues(a - b)) s += std::abs(l);
  return 0.5 * s;
}
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) { return trace_distance(a.op(), b.op()); }

/// Hilbert-Schmidt random state: M M^dagger / Tr with complex Gaussian M.
inline DensityMatrix random_density_matrix(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  Operator m(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = Complex(normal(rng), normal(rng));
  Operator p = m * m.adjoint();
  p *= Complex(1.0 / p.trace().real());
  return DensityMatrix(p);
}

/// Haar-random single-qubit pure state (I + n.sigma)/2.
inline Operator random_qubit_pure(Rng& rng) {
  std::normal_distribution<double> normal;
  double v[3];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm < 1e-24);
  norm = std::sqrt(norm);
  Operator out = pauli(0);
  for (int k = 0; k < 3; ++k) out += pauli(k + 1) * Complex(v[k] / norm);
  return out * Complex(0.5);
}

/// Flat Dirichlet(1, ..., 1) weights.
inline std::vector<double> dirichlet_uniform(Rng& rng, int k) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(k));
  double s = 0.0;
  for (double& x : w) s += (x = expo(rng));
  for (double& x : w) x /= s;
  return w;
}

/// Convex mixture of k random fully-product states on n qubits.
inline DensityMatrix random_separable(Rng& rng, int k, int qubits = 2) {
  if (k < 1) throw Error("separable mixture needs k >= 1 components");
  if (qubits < 1 || qubits > kMaxQubits) throw Error("qubit count must be 1..3");
  const std::vector<double> w = dirichlet_uniform(rng, k);
  Operator acc(1 << qubits);
  for (int i = 0; i < k; ++i) {
    Operator prod = random_qubit_pure(rng);
    for (int q = 1; q < qubits; ++q) prod = kron(prod, random_qubit_pure(rng));
    acc += prod * Complex(w[static_cast<std::size_t>(i)]);
  }
  return DensityMatrix(acc);
}

/// Mixture of the four Bell states with Dirichlet-uniform weights.
inline DensityMatrix random_bell_diagonal(Rng& rng) {
  const double h = 1.0 / std::sqrt(2.0);
  const std::array<std::array<double, 4>, 4> bell{{
      {h, 0, 0, h},
      {h, 0, 0, -h},
      {0, h, h, 0},
      {0, h, -h, 0},
  }};
  const std::vector<double> w = dirichlet_uniform(rng, 4);
  Operator acc(4);
  for (int i = 0; i < 4; ++i) acc += outer(4, bell[static_cast<std::size_t>(i)]) * Complex(w[static_cast<std::size_t>(i)]);
  return DensityMatrix(acc);
}

/// Mixes two states: alpha a + (1 - alpha) b.
inline DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double alpha) {
  return DensityMatrix(a.op() * Complex(alpha) + b.op() * Complex(1.0 - alpha));
}

}  // namespace ewgame
