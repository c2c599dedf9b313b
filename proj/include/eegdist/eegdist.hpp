#pragma once

#include "channel.hpp"
#include "codec.hpp"
#include "config.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "metrics.hpp"
#include "records.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "signal.hpp"
#include "stats/anova.hpp"
#include "stats/distributions.hpp"
#include "stats/ols.hpp"
#include "svg.hpp"
#include "wavelet.hpp"
