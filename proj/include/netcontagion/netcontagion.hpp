#pragma once

#include "contagion.hpp"
#include "errors.hpp"
#include "game.hpp"
#include "io.hpp"
#include "montecarlo.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "player_set.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "svg.hpp"
#include "verify.hpp"
