#pragma once

#include "twhm/bench.hpp"
#include "twhm/estimation.hpp"
#include "twhm/forecast.hpp"
#include "twhm/io.hpp"
#include "twhm/kmeans.hpp"
#include "twhm/ks_test.hpp"
#include "twhm/model.hpp"
#include "twhm/objective.hpp"
#include "twhm/parallel.hpp"
#include "twhm/param_vector.hpp"
#include "twhm/rng.hpp"
#include "twhm/simulator.hpp"
#include "twhm/snapshot_series.hpp"
#include "twhm/solver.hpp"
#include "twhm/sufficient_stats.hpp"
