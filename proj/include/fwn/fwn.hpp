#pragma once

// Spectral-domain white-noise testing for functional time series:
// minimal L2-distance estimation from periodogram kernels, classical and
// precise-hypothesis tests, confidence intervals, simulation models, and a
// Monte Carlo engine.

#include "fwn/core.hpp"
#include "fwn/fft.hpp"
#include "fwn/inference.hpp"
#include "fwn/io.hpp"
#include "fwn/mc.hpp"
#include "fwn/normal.hpp"
#include "fwn/rng.hpp"
#include "fwn/simulate.hpp"
#include "fwn/spectral.hpp"
#include "fwn/version.hpp"
