#pragma once

#include "basel_gap.hpp"
#include "cycles.hpp"
#include "error.hpp"
#include "ols.hpp"
#include "quarter.hpp"
#include "rates.hpp"
#include "report.hpp"
#include "series.hpp"
#include "steady_state.hpp"
#include "svg.hpp"
#include "synth.hpp"
