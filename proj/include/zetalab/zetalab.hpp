#pragma once

#include "zetalab/arithmetic_h.hpp"
#include "zetalab/core.hpp"
#include "zetalab/evaluators.hpp"
#include "zetalab/grid.hpp"
#include "zetalab/io.hpp"
#include "zetalab/matsumoto.hpp"
#include "zetalab/primes.hpp"
#include "zetalab/scanner.hpp"
#include "zetalab/special_functions.hpp"
#include "zetalab/stats.hpp"
#include "zetalab/torus.hpp"
#include "zetalab/verification.hpp"
