#pragma once

// Umbrella header: fixed-design kernel averages, the two-step trend /
// autoregression estimator, bandwidth selection, diagnostics and the
// reporting pipeline.

#include "tvreg/bandwidth.hpp"
#include "tvreg/csv.hpp"
#include "tvreg/diagnostics.hpp"
#include "tvreg/error.hpp"
#include "tvreg/kernel_averages.hpp"
#include "tvreg/kernels.hpp"
#include "tvreg/local_linear.hpp"
#include "tvreg/monte_carlo.hpp"
#include "tvreg/pipeline.hpp"
#include "tvreg/rates.hpp"
#include "tvreg/rng.hpp"
#include "tvreg/series.hpp"
#include "tvreg/svg.hpp"
#include "tvreg/tvar.hpp"
