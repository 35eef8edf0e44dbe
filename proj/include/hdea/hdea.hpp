#pragma once

// Umbrella header.

#include "errors.hpp"
#include "evolution.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "nk_landscape.hpp"
#include "operators.hpp"
#include "plot.hpp"
#include "rbn.hpp"
#include "rng.hpp"
#include "stats.hpp"
