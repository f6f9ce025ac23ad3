#pragma once

#include "rsgraph/augmentation.hpp"
#include "rsgraph/bench.hpp"
#include "rsgraph/cycle_cost.hpp"
#include "rsgraph/demand.hpp"
#include "rsgraph/errors.hpp"
#include "rsgraph/graph.hpp"
#include "rsgraph/instance.hpp"
#include "rsgraph/oracle.hpp"
#include "rsgraph/policy.hpp"
#include "rsgraph/simulation.hpp"
#include "rsgraph/solver.hpp"
