#pragma once

// Umbrella header: the whole library.

#include "triality/errors.hpp"
#include "triality/identities.hpp"
#include "triality/interferometer.hpp"
#include "triality/measures.hpp"
#include "triality/sampling.hpp"
#include "triality/scenario.hpp"
#include "triality/state.hpp"
#include "triality/table.hpp"
#include "triality/version.hpp"
