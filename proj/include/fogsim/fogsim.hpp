#pragma once

#include "fogsim/app_model.hpp"
#include "fogsim/engine.hpp"
#include "fogsim/error.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/output.hpp"
#include "fogsim/placement.hpp"
#include "fogsim/runner.hpp"
#include "fogsim/scenario.hpp"
#include "fogsim/topology.hpp"
