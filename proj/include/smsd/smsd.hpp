#pragma once

#include "smsd/analysis.hpp"
#include "smsd/channel.hpp"
#include "smsd/complexity.hpp"
#include "smsd/detectors.hpp"
#include "smsd/harness.hpp"
#include "smsd/linalg.hpp"
#include "smsd/modem.hpp"
#include "smsd/rng.hpp"
