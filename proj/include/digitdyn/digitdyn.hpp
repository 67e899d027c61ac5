#pragma once

// Umbrella header.

#include "digitdyn/automaton.hpp"
#include "digitdyn/circle_map.hpp"
#include "digitdyn/ergodic.hpp"
#include "digitdyn/markov.hpp"
#include "digitdyn/parallel.hpp"
#include "digitdyn/precision.hpp"
#include "digitdyn/radix.hpp"
#include "digitdyn/rational.hpp"
#include "digitdyn/render.hpp"
#include "digitdyn/sloane.hpp"
