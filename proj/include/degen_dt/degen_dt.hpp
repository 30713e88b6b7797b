#pragma once

// Everything at once.

#include "degen_dt/analytic.hpp"
#include "degen_dt/baselines.hpp"
#include "degen_dt/corner_integral.hpp"
#include "degen_dt/geom.hpp"
#include "degen_dt/largegrid.hpp"
#include "degen_dt/orthant.hpp"
#include "degen_dt/pointsets.hpp"
#include "degen_dt/quadrature.hpp"
#include "degen_dt/rng.hpp"
#include "degen_dt/simulate.hpp"
#include "degen_dt/triangulate.hpp"
#include "degen_dt/version.hpp"
