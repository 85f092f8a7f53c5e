#pragma once

// Umbrella header for the topological-derivative crack imaging library.

#include "tdi/geometry.hpp"
#include "tdi/specfun.hpp"
#include "tdi/scene.hpp"
#include "tdi/greens.hpp"
#include "tdi/forward.hpp"
#include "tdi/imaging.hpp"
#include "tdi/theory.hpp"
#include "tdi/experiment.hpp"
