#pragma once

#include "sdflow/config.hpp"
#include "sdflow/convergence.hpp"
#include "sdflow/errors.hpp"
#include "sdflow/flow_model.hpp"
#include "sdflow/geostatistics.hpp"
#include "sdflow/grid.hpp"
#include "sdflow/pressure.hpp"
#include "sdflow/reconstruction.hpp"
#include "sdflow/scheme.hpp"
#include "sdflow/simulation.hpp"
#include "sdflow/snapshot.hpp"
#include "sdflow/time_integrator.hpp"
