#pragma once

#include "ewgame/eigen.hpp"
#include "ewgame/game.hpp"
#include "ewgame/geometry.hpp"
#include "ewgame/multiparty.hpp"
#include "ewgame/operator.hpp"
#include "ewgame/pauli.hpp"
#include "ewgame/state.hpp"
#include "ewgame/tomography.hpp"
#include "ewgame/witness.hpp"
