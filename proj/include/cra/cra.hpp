#pragma once

#include "cra/analytics.hpp"
#include "cra/cid.hpp"
#include "cra/config.hpp"
#include "cra/core_model.hpp"
#include "cra/engine.hpp"
#include "cra/experiments.hpp"
#include "cra/geometry.hpp"
#include "cra/policy.hpp"
#include "cra/radio_params.hpp"
#include "cra/random.hpp"
#include "cra/root_finding.hpp"
#include "cra/stats.hpp"
#include "cra/units.hpp"
