#pragma once

// Umbrella header: latent-distribution comparison from ordinal data.

#include "ordq/bayes.hpp"
#include "ordq/confsets.hpp"
#include "ordq/freq_tests.hpp"
#include "ordq/gauss_sim.hpp"
#include "ordq/identify.hpp"
#include "ordq/interval.hpp"
#include "ordq/io.hpp"
#include "ordq/math.hpp"
#include "ordq/mc.hpp"
#include "ordq/ordinal.hpp"
#include "ordq/rng.hpp"
#include "ordq/version.hpp"
