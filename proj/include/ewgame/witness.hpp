#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>

#include "ewgame/eigen.hpp"
#include "ewgame/pauli.hpp"
#include "ewgame/state.hpp"

namespace ewgame {

/// Coefficients w of W = sum_t w[t] sigma_t over {0..3}^n.
struct PauliWeights : PauliTable {
  using PauliTable::PauliTable;

  void validate() const {
    bool any = false;
    for (double x : values) {
      if (!std::isfinite(x)) throw Error("witness weight is not finite");
      any = any || x != 0.0;
    }
    if (!any) throw Error("witness weights are all zero");
  }

  bool supports(int cell) const { return (*this)[cell] != 0.0; }
};

/// Hermitian operator together with its Pauli decomposition.
class Witness {
 public:
  static Witness from_weights(PauliWeights weights) {
    weights.validate();
    Operator op = pauli_sum(weights);
    return Witness(op, std::move(weights));
  }

  /// Decomposes w[t] = Tr(W sigma_t) / 2^n.
  static Witness from_operator(const Operator& op) {
    if (!op.all_finite()) throw Error("witness operator has non-finite entries");
    if (!op.is_hermitian(tol::kValidation)) throw Error("witness operator is not Hermitian");
    const CorrelationTable tr = pauli_expectations(op);
    PauliWeights w(tr.n);
    const double scale = 1.0 / static_cast<double>(1 << tr.n);
    for (int i = 0; i < tr.size(); ++i) w[i] = tr[i] * scale;
    w.validate();
    return Witness(op, std::move(w));
  }

  const Operator& op() const { return op_; }
  const PauliWeights& weights() const { return weights_; }
  int qubits() const { return weights_.n; }

 private:
  Witness(const Operator& op, PauliWeights w) : op_(op), weights_(std::move(w)) {}

  Operator op_;
  PauliWeights weights_;
};

/// -Tr(rho W): the average payoff of the honest game.
inline double expected_payoff(const DensityMatrix& rho, const Witness& w) {
  if (rho.dim() != w.op().dim()) {
    throw Error("dimension mismatch: state " + std::to_string(rho.dim()) + " vs witness " +
                std::to_string(w.op().dim()));
  }
  const Complex t = trace_product(rho.op(), w.op());
  if (std::abs(t.imag()) > tol::kValidation) throw Error("Tr(rho W) has imaginary residue");
  return -t.real();
}

/// (1/sqrt3)(I - XX + YY - ZZ)
inline Witness werner_witness() {
  const double k = 1.0 / std::sqrt(3.0);
  PauliWeights w(2);
  w.at({0, 0}) = k;
  w.at({1, 1}) = -k;
  w.at({2, 2}) = k;
  w.at({3, 3}) = -k;
  return Witness::from_weights(w);
}

/// Throws unless `a` is a 2x2 Hermitian operator with spectrum in {-1, +1}.
inline void check_observable(const Operator& a, const char* name) {
  if (a.dim() != 2) throw Error(std::string("observable ") + name + " must be a single-qubit operator");
  if (!a.is_hermitian(tol::kValidation)) throw Error(std::string("observable ") + name + " is not Hermitian");
  if (max_abs_diff(a * a, Operator::identity(2)) > tol::kValidation) {
    throw Error(std::string("observable ") + name + " does not have spectrum in {-1, +1}");
  }
}

/// A (x) B + A' (x) B + A (x) B' - A' (x) B'
inline Operator chsh_operator(const Operator& a, const Operator& a2, const Operator& b, const Operator& b2) {
  check_observable(a, "A");
  check_observable(a2, "A'");
  check_observable(b, "B");
  check_observable(b2, "B'");
  return kron(a, b) + kron(a2, b) + kron(a, b2) - kron(a2, b2);
}

/// 2 I + sign * (CHSH operator), sign in {+1, -1}.
inline Witness chsh_witness(const Operator& a, const Operator& a2, const Operator& b, const Operator& b2, int sign) {
  if (sign != 1 && sign != -1) throw Error("CHSH witness sign must be +1 or -1");
  return Witness::from_operator(Operator::identity(4) * Complex(2.0) +
                                chsh_operator(a, a2, b, b2) * Complex(static_cast<double>(sign)));
}

/// The observable settings A = X, A' = Z, B = -(X+Z)/sqrt2, B' = (Z-X)/sqrt2.
struct ChshSettings {
  Operator a, a2, b, b2;

  static ChshSettings standard() {
    const Complex r = 1.0 / std::sqrt(2.0);
    return {pauli(1), pauli(3), (pauli(1) + pauli(3)) * (-r), (pauli(3) - pauli(1)) * r};
  }
};

/// Uses W+ when it yields a positive payoff on `rho`, otherwise W-.
inline Witness select_chsh_witness(const DensityMatrix& rho, const ChshSettings& s) {
  Witness plus = chsh_witness(s.a, s.a2, s.b, s.b2, +1);
  if (expected_payoff(rho, plus) > 0.0) return plus;
  return chsh_witness(s.a, s.a2, s.b, s.b2, -1);
}

/// I - (XX + ZZ)/sqrt2
inline Witness fixed_chsh_witness() {
  const double k = 1.0 / std::sqrt(2.0);
  PauliWeights w(2);
  w.at({0, 0}) = 1.0;
  w.at({1, 1}) = -k;
  w.at({3, 3}) = -k;
  return Witness::from_weights(w);
}

/// (1/sqrt2)(I - XX - ZZ)
inline Witness strengthened_chsh_witness() {
  const double k = 1.0 / std::sqrt(2.0);
  PauliWeights w(2);
  w.at({0, 0}) = k;
  w.at({1, 1}) = -k;
  w.at({3, 3}) = -k;
  return Witness::from_weights(w);
}

class PptStateError : public Error {
 public:
  PptStateError() : Error("state is PPT") {}
};

/// (|phi><phi|)^{T_B} for the most negative eigenvector phi of rho^{T_B}.
/// Tr(rho W) equals that eigenvalue; Tr(sigma W) >= 0 for every separable sigma.
inline Witness ppt_witness(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error("PPT witness requires a two-qubit state");
  const EigenSystem es = hermitian_eigensystem(partial_transpose(rho));
  if (es.values.front() >= -1e-9) throw PptStateError();
  const auto phi = es.vector(0);
  return Witness::from_operator(partial_transpose(outer(4, std::span<const Complex>(phi.data(), 4))));
}

struct CheckReport {
  double payoff_on_target = 0.0;
  double min_separable_value = std::numeric_limits<double>::infinity();  // min Tr(sigma W)
  long n_samples = 0;
  bool verdict = false;
};

/// Evaluates the payoff on `rho` and Tr(sigma W) on random separable states.
inline CheckReport check_witness(const Witness& w, const DensityMatrix& rho, long n_samples, Rng& rng) {
  if (n_samples < 1) throw Error("check_witness needs at least one separable sample");
  CheckReport rep;
  rep.payoff_on_target = expected_payoff(rho, w);
  rep.n_samples = n_samples;
  std::uniform_int_distribution<int> components(1, 3);
  for (long i = 0; i < n_samples; ++i) {
    const DensityMatrix sigma = random_separable(rng, components(rng), w.qubits());
    rep.min_separable_value = std::min(rep.min_separable_value, -expected_payoff(sigma, w));
  }
  rep.verdict = rep.payoff_on_target > 0.0 && rep.min_separable_value >= -1e-9;
  return rep;
}

}  // namespace ewgame
