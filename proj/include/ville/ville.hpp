#ifndef VILLE_VILLE_HPP
#define VILLE_VILLE_HPP

#include "ville/belief.hpp"
#include "ville/belief_bridge.hpp"
#include "ville/belief_io.hpp"
#include "ville/conditioning.hpp"
#include "ville/error.hpp"
#include "ville/game.hpp"
#include "ville/registry.hpp"
#include "ville/rng.hpp"
#include "ville/scalar.hpp"
#include "ville/scenario_io.hpp"
#include "ville/strategies.hpp"
#include "ville/transcript_io.hpp"
#include "ville/ville_test.hpp"

#endif  // VILLE_VILLE_HPP
