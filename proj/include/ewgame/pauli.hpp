#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ewgame/operator.hpp"

namespace ewgame {

/// 0 -> I, 1 -> sigma_x, 2 -> sigma_y, 3 -> sigma_z.
using PauliIndex = int;

inline constexpr int kMaxQubits = 3;

inline int pow4(int n) { return 1 << (2 * n); }

inline void check_labels(std::span<const PauliIndex> labels) {
  if (labels.empty() || labels.size() > static_cast<std::size_t>(kMaxQubits)) {
    throw Error("Pauli string must have 1 to 3 labels, got " + std::to_string(labels.size()));
  }
  for (PauliIndex l : labels) {
    if (l < 0 || l > 3) throw Error("Pauli label out of range: " + std::to_string(l));
  }
}

/// Position of a label tuple in a 4^n table; the first label is most significant.
inline int flat_index(std::span<const PauliIndex> labels) {
  check_labels(labels);
  int idx = 0;
  for (PauliIndex l : labels) idx = idx * 4 + l;
  return idx;
}
inline int flat_index(std::initializer_list<PauliIndex> labels) {
  return flat_index(std::span<const PauliIndex>(labels.begin(), labels.size()));
}

inline std::vector<PauliIndex> labels_of(int index, int n) {
  std::vector<PauliIndex> out(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = index % 4;
    index /= 4;
  }
  return out;
}

inline std::string label_name(std::span<const PauliIndex> labels) {
  static const char* names = "IXYZ";
  std::string s;
  for (PauliIndex l : labels) s += names[l];
  return s;
}

inline const Operator& pauli(PauliIndex l) {
  static const std::array<Operator, 4> table = [] {
    std::array<Operator, 4> t{Operator::identity(2), Operator(2), Operator(2), Operator(2)};
    t[1](0, 1) = 1.0;
    t[1](1, 0) = 1.0;
    t[2](0, 1) = Complex(0.0, -1.0);
    t[2](1, 0) = Complex(0.0, 1.0);
    t[3](0, 0) = 1.0;
    t[3](1, 1) = -1.0;
    return t;
  }();
  if (l < 0 || l > 3) throw Error("Pauli label out of range: " + std::to_string(l));
  return table[static_cast<std::size_t>(l)];
}

/// All 4^n Pauli strings on n qubits, in flat_index order.
inline const std::vector<Operator>& pauli_basis(int n) {
  static const std::array<std::vector<Operator>, kMaxQubits + 1> cache = [] {
    std::array<std::vector<Operator>, kMaxQubits + 1> c;
    for (int q = 1; q <= kMaxQubits; ++q) {
      for (int i = 0; i < pow4(q); ++i) {
        auto labels = labels_of(i, q);
        Operator op = pauli(labels[0]);
        for (int k = 1; k < q; ++k) op = kron(op, pauli(labels[static_cast<std::size_t>(k)]));
        c[static_cast<std::size_t>(q)].push_back(op);
      }
    }
    return c;
  }();
  if (n < 1 || n > kMaxQubits) throw Error("qubit count must be 1..3, got " + std::to_string(n));
  return cache[static_cast<std::size_t>(n)];
}

inline Operator pauli_string(std::span<const PauliIndex> labels) {
  check_labels(labels);
  return pauli_basis(static_cast<int>(labels.size()))[static_cast<std::size_t>(flat_index(labels))];
}
inline Operator pauli_string(std::initializer_list<PauliIndex> labels) {
  return pauli_string(std::span<const PauliIndex>(labels.begin(), labels.size()));
}

/// Real table over {0..3}^n in flat_index order.
///
/// Used both for correlation coefficients r = Tr(rho sigma) and, through
/// PauliWeights, for witness weights w with W = sum w sigma.
struct PauliTable {
  int n = 2;
  std::vector<double> values = std::vector<double>(16, 0.0);

  PauliTable() = default;
  explicit PauliTable(int qubits) : n(qubits), values(static_cast<std::size_t>(pow4(qubits)), 0.0) {
    if (qubits < 1 || qubits > kMaxQubits) throw Error("qubit count must be 1..3");
  }

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values.at(static_cast<std::size_t>(i)); }
  double operator[](int i) const { return values.at(static_cast<std::size_t>(i)); }
  double& at(std::initializer_list<PauliIndex> l) { return (*this)[checked(l)]; }
  double at(std::initializer_list<PauliIndex> l) const { return (*this)[checked(l)]; }

 private:
  int checked(std::initializer_list<PauliIndex> l) const {
    if (static_cast<int>(l.size()) != n) throw Error("label tuple length does not match table");
    return flat_index(l);
  }
};

/// r[t] = Tr(rho sigma_t) for each Pauli string.
struct CorrelationTable : PauliTable {
  using PauliTable::PauliTable;
};

/// Tr(op sigma_t) for every t; rejects imaginary residue above `tol`.
inline CorrelationTable pauli_expectations(const Operator& op, double tol = 1e-10) {
  const int n = op.qubits();
  CorrelationTable table(n);
  const auto& basis = pauli_basis(n);
  for (int i = 0; i < table.size(); ++i) {
    const Complex v = trace_product(op, basis[static_cast<std::size_t>(i)]);
    if (std::abs(v.imag()) > tol) {
      throw Error("imaginary Pauli coefficient " + std::to_string(v.imag()) + " at " +
                  label_name(labels_of(i, n)) + ": operator is not Hermitian");
    }
    table[i] = v.real();
  }
  return table;
}

/// sum_t coeff[t] sigma_t.
inline Operator pauli_sum(const PauliTable& coeff) {
  const auto& basis = pauli_basis(coeff.n);
  Operator out(1 << coeff.n);
  for (int i = 0; i < coeff.size(); ++i) {
    if (coeff[i] != 0.0) out += basis[static_cast<std::size_t>(i)] * Complex(coeff[i]);
  }
  return out;
}

/// Inverse of pauli_expectations: 2^-n sum_t r[t] sigma_t.
inline Operator from_pauli_coefficients(const CorrelationTable& table) {
  return pauli_sum(table) * Complex(1.0 / static_cast<double>(1 << table.n));
}

}  // namespace ewgame
