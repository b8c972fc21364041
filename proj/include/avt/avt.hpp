#pragma once

#include "avt/bounds.hpp"
#include "avt/error.hpp"
#include "avt/gvt.hpp"
#include "avt/holder.hpp"
#include "avt/lp_bounds.hpp"
#include "avt/numerics.hpp"
#include "avt/rng.hpp"
#include "avt/sim.hpp"
#include "avt/sim_config.hpp"
#include "avt/special.hpp"
