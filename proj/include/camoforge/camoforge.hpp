/* camoforge: umbrella header */
#pragma once

#include "bench_io.hpp"
#include "config.hpp"
#include "device.hpp"
#include "netlist.hpp"
#include "placement.hpp"
#include "scanchain.hpp"
#include "simulate.hpp"
#include "synth.hpp"
#include "timing.hpp"
