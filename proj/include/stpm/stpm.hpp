// Umbrella header.
#pragma once

#include "stpm/config.hpp"
#include "stpm/discriminant.hpp"
#include "stpm/engine.hpp"
#include "stpm/errors.hpp"
#include "stpm/io.hpp"
#include "stpm/metrics.hpp"
#include "stpm/momoo.hpp"
#include "stpm/oracle.hpp"
#include "stpm/recording.hpp"
#include "stpm/report.hpp"
#include "stpm/rng.hpp"
#include "stpm/synthetic.hpp"
#include "stpm/types.hpp"
