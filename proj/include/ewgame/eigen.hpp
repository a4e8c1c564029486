#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "ewgame/operator.hpp"

namespace ewgame {

struct EigenSystem {
  std::vector<double> values;  // ascending
  Operator vectors;            // column k pairs with values[k]

  std::array<Complex, kMaxDim> vector(int k) const {
    std::array<Complex, kMaxDim> v{};
    for (int r = 0; r < vectors.dim(); ++r) v[static_cast<std::size_t>(r)] = vectors(r, k);
    return v;
  }

  /// sum_k f(lambda_k) v_k v_k^dagger
  template <typename F>
  Operator rebuild(F&& f) const {
    const int d = vectors.dim();
    Operator out(d);
    for (int k = 0; k < d; ++k) {
      const double lam = f(values[static_cast<std::size_t>(k)]);
      if (lam == 0.0) continue;
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out(r, c) += lam * vectors(r, k) * std::conj(vectors(c, k));
    }
    return out;
  }
};

namespace detail {

inline double off_diagonal_norm2(const Operator& a) {
  double s = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return s;
}

}  // namespace detail

/// Eigen-decomposition of a Hermitian operator by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of a(p,q) with a diagonal unitary, then
/// applies the real symmetric Jacobi rotation that annihilates the now-real entry.
inline EigenSystem hermitian_eigensystem(const Operator& op, double herm_tol = 1e-10) {
  if (!op.all_finite()) throw Error("eigensolver input has non-finite entries");
  if (!op.is_hermitian(herm_tol)) {
    throw Error("eigensolver input is not Hermitian (defect " + std::to_string(op.hermiticity_defect()) + ")");
  }
  const int d = op.dim();
  Operator a = op;
  // Symmetrize away sub-tolerance asymmetry so the rotations stay exact.
  for (int r = 0; r < d; ++r) {
    a(r, r) = a(r, r).real();
    for (int c = r + 1; c < d; ++c) {
      const Complex m = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = m;
      a(c, r) = std::conj(m);
    }
  }
  Operator v = Operator::identity(d);

  double scale = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) scale += std::norm(a(r, c));
  const double stop = std::max(scale, 1e-300) * 1e-32;

  for (int sweep = 0; sweep < 100 && detail::off_diagonal_norm2(a) > stop; ++sweep) {
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double g = std::abs(a(p, q));
        if (g == 0.0) continue;
        const Complex phase = std::conj(a(p, q)) / g;  // a(p,q) * phase is real positive
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // U = diag(.., 1@p, phase@q, ..) * R(c, s)
        const Complex upp = c, upq = s, uqp = -s * phase, uqq = c * phase;

        for (int k = 0; k < d; ++k) {  // a <- a U
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (int k = 0; k < d; ++k) {  // a <- U^dagger a
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (int k = 0; k < d; ++k) {  // v <- v U
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });

  EigenSystem es{std::vector<double>(static_cast<std::size_t>(d)), Operator(d)};
  for (int k = 0; k < d; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    es.values[static_cast<std::size_t>(k)] = a(src, src).real();
    for (int r = 0; r < d; ++r) es.vectors(r, k) = v(r, src);
  }
  return es;
}

inline std::vector<double> hermitian_eigenvalues(const Operator& op) { return hermitian_eigensystem(op).values; }

}  // namespace ewgame
