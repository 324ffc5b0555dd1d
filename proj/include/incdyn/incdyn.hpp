#pragma once

// Umbrella header for the incentive-dynamics library.

#include "incdyn/cli.hpp"
#include "incdyn/config.hpp"
#include "incdyn/dynamics.hpp"
#include "incdyn/errors.hpp"
#include "incdyn/games.hpp"
#include "incdyn/geometry.hpp"
#include "incdyn/incentives.hpp"
#include "incdyn/information.hpp"
#include "incdyn/io.hpp"
#include "incdyn/rng.hpp"
#include "incdyn/stability.hpp"
