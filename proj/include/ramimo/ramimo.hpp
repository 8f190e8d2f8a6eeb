#pragma once

// Umbrella header for the repeater-assisted massive MIMO simulator.

#include "channel.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "hwbudget.hpp"
#include "manifest.hpp"
#include "montecarlo.hpp"
#include "receiver.hpp"
#include "repeater.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "svg.hpp"
#include "units.hpp"
