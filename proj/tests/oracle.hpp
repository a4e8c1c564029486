#pragma once

// Test-only reference computations built on Eigen, independent of the
// library's own eigensolver, projector formulas and Pauli tables.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

#include "ewgame/operator.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using C = std::complex<double>;

inline Mat to_eigen(const ewgame::Operator& op) {
  Mat m(op.dim(), op.dim());
  for (int r = 0; r < op.dim(); ++r)
    for (int c = 0; c < op.dim(); ++c) m(r, c) = op(r, c);
  return m;
}

inline Mat sigma(int k) {
  Mat m(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, C(0, -1), C(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat pauli_string(const std::vector<int>& labels) {
  Mat m = sigma(labels[0]);
  for (std::size_t k = 1; k < labels.size(); ++k) m = kron(m, sigma(labels[k]));
  return m;
}

inline Eigen::VectorXd eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return es.eigenvalues();
}

/// Projector onto the eigenspace of sigma_k with eigenvalue `a`, from Eigen's
/// eigendecomposition; sigma_0 has only eigenvalue +1.
inline Mat eigenprojector(int k, int a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma(k));
  Mat p = Mat::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    if (std::abs(es.eigenvalues()(i) - a) < 1e-9) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

inline Mat partial_transpose_b(const Mat& m) {
  Mat out(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) out(2 * a + b2, 2 * a2 + b) = m(2 * a + b, 2 * a2 + b2);
  return out;
}

/// sum over labels and answers of Pi * V * (-w a b.. / Pi), with V from eigenprojectors.
inline double enumerate_payoff(const Mat& rho, const std::vector<double>& pi, const std::vector<double>& w, int n) {
  const int cells = 1 << (2 * n);
  double total = 0.0;
  for (int cell = 0; cell < cells; ++cell) {
    if (pi[cell] == 0.0) continue;
    std::vector<int> labels(n);
    for (int k = n - 1, x = cell; k >= 0; --k, x /= 4) labels[k] = x % 4;
    for (int o = 0; o < (1 << n); ++o) {
      Mat proj;
      int prod = 1;
      for (int k = 0; k < n; ++k) {
        const int a = (o >> k) & 1 ? -1 : 1;
        prod *= a;
        const Mat p = eigenprojector(labels[k], a);
        proj = k == 0 ? p : kron(proj, p);
      }
      const double v = (rho * proj).trace().real();
      total += pi[cell] * v * (-w[cell] * prod / pi[cell]);
    }
  }
  return total;
}

}  // namespace oracle
