#pragma once

#include "netsense/error.hpp"
#include "netsense/geometry.hpp"
#include "netsense/scene.hpp"
#include "netsense/scenario_io.hpp"
#include "netsense/hull.hpp"
#include "netsense/wavenumber.hpp"
#include "netsense/synth.hpp"
#include "netsense/image.hpp"
#include "netsense/parallel.hpp"
#include "netsense/imaging.hpp"
#include "netsense/fusion.hpp"
#include "netsense/metrics.hpp"
#include "netsense/presets.hpp"
#include "netsense/orchestrate.hpp"
#include "netsense/io.hpp"
