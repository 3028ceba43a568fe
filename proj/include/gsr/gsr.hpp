#pragma once

// Umbrella header.

#include "gsr/automata.hpp"
#include "gsr/chains.hpp"
#include "gsr/dominance.hpp"
#include "gsr/dot.hpp"
#include "gsr/game.hpp"
#include "gsr/oracle.hpp"
#include "gsr/synthesis.hpp"
#include "gsr/values.hpp"
