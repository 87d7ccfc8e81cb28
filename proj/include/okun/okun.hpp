#pragma once

// Umbrella header for the Okun's-law estimation toolkit.

#include "okun/csv.hpp"
#include "okun/diagnostics.hpp"
#include "okun/errors.hpp"
#include "okun/model.hpp"
#include "okun/model_io.hpp"
#include "okun/regress.hpp"
#include "okun/report.hpp"
#include "okun/series.hpp"
#include "okun/simulate.hpp"
#include "okun/svg.hpp"
