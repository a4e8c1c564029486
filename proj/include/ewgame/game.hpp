#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ewgame/pauli.hpp"
#include "ewgame/state.hpp"
#include "ewgame/witness.hpp"

namespace ewgame {

template <int N>
using Labels = std::array<PauliIndex, N>;

/// Answers in {-1, +1}, one per player.
template <int N>
using Outcomes = std::array<int, N>;

/// Probabilities over the 2^N outcome tuples; bit k set means player k answered -1.
template <int N>
using OutcomeDistribution = std::array<double, (1u << N)>;

template <int N>
constexpr int cells() {
  return 1 << (2 * N);
}

template <int N>
int cell_of(const Labels<N>& l) {
  int idx = 0;
  for (PauliIndex x : l) idx = idx * 4 + x;
  return idx;
}

template <int N>
Labels<N> labels_at(int cell) {
  Labels<N> l{};
  for (int k = N - 1; k >= 0; --k) {
    l[static_cast<std::size_t>(k)] = cell % 4;
    cell /= 4;
  }
  return l;
}

template <int N>
Outcomes<N> outcomes_at(unsigned index) {
  Outcomes<N> o{};
  for (int k = 0; k < N; ++k) o[static_cast<std::size_t>(k)] = (index >> k) & 1u ? -1 : 1;
  return o;
}

template <int N>
int product(const Outcomes<N>& o) {
  int p = 1;
  for (int x : o) p *= x;
  return p;
}

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Label distribution Pi over {0..3}^N.
template <int N>
struct LabelDistribution {
  std::array<double, cells<N>()> p{};

  static LabelDistribution uniform() {
    LabelDistribution d;
    d.p.fill(1.0 / cells<N>());
    return d;
  }

  /// Uniform over the cells where the weights are nonzero.
  static LabelDistribution support_only(const PauliWeights& w) {
    if (w.n != N) throw ConfigError("weights have the wrong number of qubits for this game");
    LabelDistribution d;
    int k = 0;
    for (int i = 0; i < cells<N>(); ++i) k += w.supports(i) ? 1 : 0;
    if (k == 0) throw ConfigError("weights have empty support");
    for (int i = 0; i < cells<N>(); ++i) d.p[static_cast<std::size_t>(i)] = w.supports(i) ? 1.0 / k : 0.0;
    return d;
  }

  double operator[](int cell) const { return p[static_cast<std::size_t>(cell)]; }

  void validate() const {
    double s = 0.0;
    for (double x : p) {
      if (!std::isfinite(x) || x < 0.0) throw ConfigError("label probabilities must be finite and nonnegative");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw ConfigError("label probabilities sum to " + std::to_string(s) + ", expected 1");
  }

  /// Throws if some nonzero weight sits on a cell the referee never asks.
  void validate_against(const PauliWeights& w) const {
    validate();
    if (w.n != N) throw ConfigError("weights have the wrong number of qubits for this game");
    std::string missing;
    for (int i = 0; i < cells<N>(); ++i) {
      if (w.supports(i) && p[static_cast<std::size_t>(i)] <= 0.0) {
        if (!missing.empty()) missing += ", ";
        missing += label_name(labels_of(i, N));
      }
    }
    if (!missing.empty()) throw ConfigError("label distribution is zero on witness support: " + missing);
  }
};

template <int N>
struct GameConfig {
  LabelDistribution<N> pi = LabelDistribution<N>::uniform();
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Records are kept only up to this many rounds; beyond it only moments are retained.
  std::uint64_t record_limit = 100000;
};

template <int N>
struct RoundRecord {
  Labels<N> labels{};
  Outcomes<N> outcomes{};
  double payoff = 0.0;

  bool operator==(const RoundRecord&) const = default;
};

/// Referee-side view of a run: optional per-round records plus mergeable moments.
template <int N>
struct Transcript {
  std::vector<RoundRecord<N>> records;
  std::array<std::uint64_t, cells<N>()> counts{};
  std::array<std::int64_t, cells<N>()> sum_products{};  // sum of a*b(*c) per cell
  std::uint64_t rounds = 0;
  double payoff_mean = 0.0;
  double payoff_m2 = 0.0;  // sum of squared deviations from the mean
  std::uint64_t seed = 0;

  void add(const RoundRecord<N>& r, bool keep) {
    const int cell = cell_of<N>(r.labels);
    counts[static_cast<std::size_t>(cell)] += 1;
    sum_products[static_cast<std::size_t>(cell)] += product<N>(r.outcomes);
    rounds += 1;
    const double delta = r.payoff - payoff_mean;
    payoff_mean += delta / static_cast<double>(rounds);
    payoff_m2 += delta * (r.payoff - payoff_mean);
    if (keep) records.push_back(r);
  }

  /// Appends `other`; moments combine by the parallel-variance formula.
  void merge(const Transcript& other) {
    for (int i = 0; i < cells<N>(); ++i) {
      counts[static_cast<std::size_t>(i)] += other.counts[static_cast<std::size_t>(i)];
      sum_products[static_cast<std::size_t>(i)] += other.sum_products[static_cast<std::size_t>(i)];
    }
    if (other.rounds > 0) {
      const double na = static_cast<double>(rounds), nb = static_cast<double>(other.rounds);
      const double delta = other.payoff_mean - payoff_mean;
      const double n = na + nb;
      payoff_mean += delta * nb / n;
      payoff_m2 += other.payoff_m2 + delta * delta * na * nb / n;
      rounds += other.rounds;
    }
    records.insert(records.end(), other.records.begin(), other.records.end());
  }

  bool operator==(const Transcript&) const = default;
};

/// A rule producing answers from labels and private/shared randomness.
///
/// `exact` returns the conditional answer distribution, used for exact
/// expectations by enumeration; it is optional for user strategies.
template <int N>
struct Strategy {
  std::string name;
  std::function<Outcomes<N>(const Labels<N>&, Rng&)> respond;
  std::function<OutcomeDistribution<N>(const Labels<N>&)> exact;
};

/// Born-rule distribution of the answers when each player measures the Pauli
/// operator named by their label; label 0 always answers +1.
template <int N>
OutcomeDistribution<N> outcome_distribution(const DensityMatrix& rho, const Labels<N>& labels) {
  if (rho.qubits() != N) throw Error("state has the wrong number of qubits for this game");
  for (PauliIndex l : labels)
    if (l < 0 || l > 3) throw Error("Pauli label out of range: " + std::to_string(l));
  OutcomeDistribution<N> dist{};
  for (unsigned o = 0; o < (1u << N); ++o) {
    const Outcomes<N> out = outcomes_at<N>(o);
    Operator proj(2);
    for (int k = 0; k < N; ++k) {
      const PauliIndex l = labels[static_cast<std::size_t>(k)];
      const int a = out[static_cast<std::size_t>(k)];
      // P_+ = (I + sigma)/2, P_- = (I - sigma)/2; for label 0, P_+ = I and P_- = 0.
      const Operator p = (pauli(0) + pauli(l) * Complex(static_cast<double>(a))) * Complex(0.5);
      proj = k == 0 ? p : kron(proj, p);
    }
    const Complex v = trace_product(rho.op(), proj);
    dist[o] = std::max(0.0, v.real());
  }
  return dist;
}

/// Honest players: each round samples answers from the Born distribution.
template <int N>
Strategy<N> honest_strategy(const DensityMatrix& rho) {
  if (rho.qubits() != N) throw Error("state has the wrong number of qubits for this game");
  using Table = std::array<OutcomeDistribution<N>, cells<N>()>;
  auto table = std::make_shared<Table>();
  auto cumulative = std::make_shared<Table>();
  for (int c = 0; c < cells<N>(); ++c) {
    auto& d = (*table)[static_cast<std::size_t>(c)];
    d = outcome_distribution<N>(rho, labels_at<N>(c));
    auto& cum = (*cumulative)[static_cast<std::size_t>(c)];
    std::partial_sum(d.begin(), d.end(), cum.begin());
  }
  Strategy<N> s;
  s.name = "honest";
  s.respond = [cumulative](const Labels<N>& l, Rng& rng) {
    const auto& cum = (*cumulative)[static_cast<std::size_t>(cell_of<N>(l))];
    const double u = std::uniform_real_distribution<double>(0.0, cum.back())(rng);
    unsigned o = 0;
    while (o + 1 < (1u << N) && u >= cum[o]) ++o;
    return outcomes_at<N>(o);
  };
  s.exact = [table](const Labels<N>& l) { return (*table)[static_cast<std::size_t>(cell_of<N>(l))]; };
  return s;
}

/// Classical cheat: three shared random bits reproduce the diagonal
/// correlations of |psi+> (XX = +1, YY = -1, ZZ = +1) without entanglement.
inline Strategy<2> classical_cheat_strategy() {
  // shared[u] for u = 1, 2, 3: Alice's bit; Bob gets the same bit for x and z, the flipped bit for y.
  auto answer = [](const Labels<2>& l, const std::array<int, 3>& shared) {
    static constexpr std::array<int, 3> bob_sign{1, -1, 1};
    Outcomes<2> o{1, 1};
    if (l[0] != 0) o[0] = shared[static_cast<std::size_t>(l[0] - 1)];
    if (l[1] != 0) o[1] = bob_sign[static_cast<std::size_t>(l[1] - 1)] * shared[static_cast<std::size_t>(l[1] - 1)];
    return o;
  };
  Strategy<2> s;
  s.name = "cheat";
  s.respond = [answer](const Labels<2>& l, Rng& rng) {
    const std::uint64_t bits = rng();
    const std::array<int, 3> shared{bits & 1u ? -1 : 1, bits & 2u ? -1 : 1, bits & 4u ? -1 : 1};
    return answer(l, shared);
  };
  s.exact = [answer](const Labels<2>& l) {
    OutcomeDistribution<2> d{};
    for (unsigned bits = 0; bits < 8; ++bits) {
      const std::array<int, 3> shared{bits & 1u ? -1 : 1, bits & 2u ? -1 : 1, bits & 4u ? -1 : 1};
      const Outcomes<2> o = answer(l, shared);
      d[(o[0] < 0 ? 1u : 0u) | (o[1] < 0 ? 2u : 0u)] += 1.0 / 8.0;
    }
    return d;
  };
  return s;
}

/// -w[cell] * (product of answers) / Pi(cell)
template <int N>
double round_payoff(const PauliWeights& w, const LabelDistribution<N>& pi, const Labels<N>& l, const Outcomes<N>& o) {
  const int cell = cell_of<N>(l);
  const double wc = w[cell];
  if (wc == 0.0) return 0.0;
  return -wc * static_cast<double>(product<N>(o)) / pi[cell];
}

/// Exact average payoff sum_{labels, answers} Pi V payoff, by enumeration.
template <int N>
double exact_average_payoff(const LabelDistribution<N>& pi, const Strategy<N>& s, const PauliWeights& w) {
  if (!s.exact) throw Error("strategy '" + s.name + "' has no exact answer distribution");
  pi.validate_against(w);
  double total = 0.0;
  for (int c = 0; c < cells<N>(); ++c) {
    if (pi[c] == 0.0) continue;
    const Labels<N> l = labels_at<N>(c);
    const OutcomeDistribution<N> v = s.exact(l);
    for (unsigned o = 0; o < (1u << N); ++o) total += pi[c] * v[o] * round_payoff<N>(w, pi, l, outcomes_at<N>(o));
  }
  return total;
}

/// Independent stream for worker `worker` of a run seeded with `seed`.
inline Rng worker_rng(std::uint64_t seed, std::uint64_t worker) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(worker), static_cast<std::uint32_t>(worker >> 32)};
  return Rng(seq);
}

namespace detail {

template <int N>
Transcript<N> play_rounds(const GameConfig<N>& config, const Strategy<N>& strategy, const PauliWeights& w,
                          std::uint64_t rounds, Rng rng, bool keep) {
  std::array<double, cells<N>()> cum{};
  std::partial_sum(config.pi.p.begin(), config.pi.p.end(), cum.begin());
  int last = cells<N>() - 1;
  while (last > 0 && config.pi[last] == 0.0) --last;

  Transcript<N> tr;
  if (keep) tr.records.reserve(rounds);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t i = 0; i < rounds; ++i) {
    const double u = unit(rng);
    int cell = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (cell > last) cell = last;
    RoundRecord<N> r;
    r.labels = labels_at<N>(cell);
    r.outcomes = strategy.respond(r.labels, rng);
    for (int a : r.outcomes)
      if (a != 1 && a != -1) throw Error("strategy '" + strategy.name + "' answered outside {-1, +1}");
    r.payoff = round_payoff<N>(w, config.pi, r.labels, r.outcomes);
    tr.add(r, keep);
  }
  return tr;
}

}  // namespace detail

/// Plays `config.rounds` rounds. Deterministic for a given (seed, workers);
/// workers = 1 is the reference stream.
template <int N>
Transcript<N> run_game(const GameConfig<N>& config, const Strategy<N>& strategy, const PauliWeights& w) {
  config.pi.validate_against(w);
  if (!strategy.respond) throw Error("strategy '" + strategy.name + "' has no responder");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  const bool keep = config.rounds <= config.record_limit;
  const auto workers = static_cast<std::uint64_t>(config.workers);

  Transcript<N> out;
  out.seed = config.seed;
  if (workers == 1) {
    out.merge(detail::play_rounds<N>(config, strategy, w, config.rounds, worker_rng(config.seed, 0), keep));
    return out;
  }
  std::vector<Transcript<N>> parts(workers);
  std::vector<std::thread> threads;
  for (std::uint64_t k = 0; k < workers; ++k) {
    const std::uint64_t n = config.rounds / workers + (k < config.rounds % workers ? 1 : 0);
    threads.emplace_back([&, k, n] {
      parts[k] = detail::play_rounds<N>(config, strategy, w, n, worker_rng(config.seed, k), keep);
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& p : parts) out.merge(p);
  return out;
}

struct PayoffEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

template <int N>
PayoffEstimate empirical_payoff(const Transcript<N>& tr) {
  if (tr.rounds < 2) throw Error("empirical payoff needs at least two rounds");
  const double n = static_cast<double>(tr.rounds);
  const double var = std::max(0.0, tr.payoff_m2 / (n - 1.0));
  return {tr.payoff_mean, std::sqrt(var / n)};
}

struct ChshResult {
  double value = 0.0;
  bool violates_classical = false;     // |S| > 2
  bool exceeds_strengthened = false;   // |S| > sqrt2, meaningful for ChshSettings::standard()
};

inline ChshResult chsh_value(const DensityMatrix& rho, const Operator& a, const Operator& a2, const Operator& b,
                             const Operator& b2) {
  if (rho.dim() != 4) throw Error("CHSH value requires a two-qubit state");
  const Complex s = trace_product(rho.op(), chsh_operator(a, a2, b, b2));
  ChshResult r;
  r.value = s.real();
  r.violates_classical = std::abs(r.value) > 2.0;
  r.exceeds_strengthened = std::abs(r.value) > std::sqrt(2.0);
  return r;
}
inline ChshResult chsh_value(const DensityMatrix& rho, const ChshSettings& s) {
  return chsh_value(rho, s.a, s.a2, s.b, s.b2);
}

}  // namespace ewgame
