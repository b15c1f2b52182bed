#pragma once

#include "cbch/errors.hpp"
#include "cbch/lie_core.hpp"
#include "cbch/solver.hpp"
#include "cbch/oracles.hpp"
#include "cbch/trotter.hpp"
#include "cbch/parity_lab.hpp"
