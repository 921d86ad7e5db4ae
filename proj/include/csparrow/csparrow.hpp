#pragma once

// Umbrella header for the whole library.

#include "csparrow/cluster.hpp"
#include "csparrow/error.hpp"
#include "csparrow/exhaustive.hpp"
#include "csparrow/experiment.hpp"
#include "csparrow/flip.hpp"
#include "csparrow/formula.hpp"
#include "csparrow/linalg.hpp"
#include "csparrow/markov.hpp"
#include "csparrow/report.hpp"
#include "csparrow/rng.hpp"
#include "csparrow/solver.hpp"
