#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ewgame/eigen.hpp"
#include "ewgame/game.hpp"
#include "ewgame/pauli.hpp"
#include "ewgame/state.hpp"

namespace ewgame {

class IncompleteTomographyError : public Error {
 public:
  IncompleteTomographyError(std::vector<int> missing_cells, const std::string& what)
      : Error(what), missing(std::move(missing_cells)) {}
  std::vector<int> missing;
};

/// Per-cell answer statistics for the two-qubit game.
///
/// Counts are real so that exact distributions can be fed in as weights.
struct Moments {
  std::array<double, 16> count{};
  std::array<double, 16> sum_ab{};

  double estimate(int cell) const {
    const auto c = static_cast<std::size_t>(cell);
    return count[c] > 0.0 ? sum_ab[c] / count[c] : 0.0;
  }

  /// Binomial standard error sqrt((1 - r^2)/n) of a cell estimate.
  double std_error(int cell) const {
    const auto c = static_cast<std::size_t>(cell);
    if (count[c] <= 0.0) return 0.0;
    const double r = estimate(cell);
    return std::sqrt(std::max(0.0, 1.0 - r * r) / count[c]);
  }

  std::vector<int> missing_cells() const {
    std::vector<int> out;
    for (int i = 0; i < 16; ++i)
      if (count[static_cast<std::size_t>(i)] <= 0.0) out.push_back(i);
    return out;
  }

  void require_complete() const {
    const auto missing = missing_cells();
    if (missing.empty()) return;
    std::string names;
    for (int c : missing) names += (names.empty() ? "" : ", ") + label_name(labels_of(c, 2));
    throw IncompleteTomographyError(missing, "incomplete tomography: " + std::to_string(missing.size()) +
                                                 " label cells never asked: " + names);
  }

  void merge(const Moments& o) {
    for (std::size_t i = 0; i < 16; ++i) {
      count[i] += o.count[i];
      sum_ab[i] += o.sum_ab[i];
    }
  }
};

/// Per-cell moments from a game transcript; throws if any cell is empty.
inline Moments accumulate(const Transcript<2>& tr) {
  Moments m;
  for (std::size_t i = 0; i < 16; ++i) {
    m.count[i] = static_cast<double>(tr.counts[i]);
    m.sum_ab[i] = static_cast<double>(tr.sum_products[i]);
  }
  m.require_complete();
  return m;
}

/// Moments in the infinite-sample limit: each cell weighted by `weight`,
/// answers distributed exactly as the Born rule says.
inline Moments exact_moments(const DensityMatrix& rho, double weight = 1.0) {
  Moments m;
  for (int c = 0; c < 16; ++c) {
    const auto v = outcome_distribution<2>(rho, labels_at<2>(c));
    const auto i = static_cast<std::size_t>(c);
    m.count[i] = weight;
    m.sum_ab[i] = weight * (v[0] - v[1] - v[2] + v[3]);
  }
  return m;
}

/// (1/4) sum r_hat[s,t] sigma_s (x) sigma_t
inline Operator linear_inversion(const Moments& m) {
  m.require_complete();
  CorrelationTable r(2);
  for (int c = 0; c < 16; ++c) r[c] = m.estimate(c);
  return from_pauli_coefficients(r);
}

/// Clips negative eigenvalues to zero and renormalizes the trace in the same eigenbasis.
inline DensityMatrix project_psd(const Operator& raw) {
  if (!raw.is_hermitian(tol::kValidation)) throw Error("projection input is not Hermitian");
  const EigenSystem es = hermitian_eigensystem(raw);
  double kept = 0.0;
  for (double l : es.values) kept += std::max(0.0, l);
  if (kept <= 0.0) throw Error("projection input has no positive eigenvalues");
  if (es.values.front() >= 0.0 && std::abs(kept - 1.0) <= 1e-15) return DensityMatrix(raw);
  return DensityMatrix(es.rebuild([kept](double l) { return std::max(0.0, l) / kept; }));
}

struct Estimate {
  CorrelationTable r_hat{2};
  std::array<double, 16> std_errors{};
  Operator raw{4};
  DensityMatrix projected = maximally_mixed(4);
};

inline Estimate reconstruct(const Moments& m) {
  Estimate e;
  m.require_complete();
  for (int c = 0; c < 16; ++c) {
    e.r_hat[c] = m.estimate(c);
    e.std_errors[static_cast<std::size_t>(c)] = m.std_error(c);
  }
  e.raw = linear_inversion(m);
  e.projected = project_psd(e.raw);
  return e;
}

inline double reconstruction_error(const DensityMatrix& truth, const Estimate& est) {
  return trace_distance(truth, est.projected);
}

}  // namespace ewgame
