#pragma once

#include "fairsched/rational.hpp"
#include "fairsched/core_model.hpp"
#include "fairsched/criteria.hpp"
#include "fairsched/random.hpp"
#include "fairsched/engine.hpp"
#include "fairsched/trials.hpp"
#include "fairsched/online_sim.hpp"
#include "fairsched/presets.hpp"
#include "fairsched/report.hpp"
#include "fairsched/scenario_io.hpp"
