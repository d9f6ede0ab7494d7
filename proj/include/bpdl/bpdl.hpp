#pragma once

#include "bpdl/config.hpp"
#include "bpdl/core_space.hpp"
#include "bpdl/errors.hpp"
#include "bpdl/ext_real.hpp"
#include "bpdl/fke.hpp"
#include "bpdl/functionals.hpp"
#include "bpdl/io.hpp"
#include "bpdl/limits.hpp"
#include "bpdl/meanfield.hpp"
#include "bpdl/particles.hpp"
#include "bpdl/rng.hpp"
