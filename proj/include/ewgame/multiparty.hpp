#pragma once

#include <array>
#include <cmath>

#include "ewgame/game.hpp"
#include "ewgame/state.hpp"
#include "ewgame/witness.hpp"

namespace ewgame {

/// Weights over {0..3}^3.
using Weights3 = PauliWeights;

inline const Operator& ghz_projector() {
  static const Operator p = [] {
    const double h = 1.0 / std::sqrt(2.0);
    return outer(8, std::array<double, 8>{h, 0, 0, 0, 0, 0, 0, h});
  }();
  return p;
}

/// (|000> + |111>)/sqrt2
inline DensityMatrix ghz_state() { return DensityMatrix(ghz_projector()); }

/// I/2 - |GHZ><GHZ|. Fully separable states have fidelity at most 1/2 with GHZ.
inline Witness ghz_witness() { return Witness::from_operator(Operator::identity(8) * Complex(0.5) - ghz_projector()); }

inline double expected_payoff3(const DensityMatrix& rho, const Weights3& w) {
  if (rho.dim() != 8) throw Error("three-party payoff requires an 8x8 state, got " + std::to_string(rho.dim()));
  if (w.n != 3) throw Error("three-party payoff requires weights over {0..3}^3");
  return expected_payoff(rho, Witness::from_weights(w));
}

using GameConfig3 = GameConfig<3>;
using Transcript3 = Transcript<3>;
using RoundRecord3 = RoundRecord<3>;
using Strategy3 = Strategy<3>;

inline Transcript3 run_game3(const GameConfig3& config, const Strategy3& strategy, const Weights3& w) {
  if (w.n != 3) throw Error("three-party game requires weights over {0..3}^3");
  return run_game<3>(config, strategy, w);
}

}  // namespace ewgame
