#pragma once

// Umbrella header for the anisotropic Littlewood-Paley toolkit.

#include "parlp/version.hpp"
#include "parlp/errors.hpp"
#include "parlp/random.hpp"
#include "parlp/parallel.hpp"
#include "parlp/linalg.hpp"
#include "parlp/dilation.hpp"
#include "parlp/fft.hpp"
#include "parlp/grid.hpp"
#include "parlp/symbols.hpp"
#include "parlp/gfa.hpp"
#include "parlp/partition.hpp"
#include "parlp/lp_transform.hpp"
#include "parlp/maximal.hpp"
#include "parlp/hardy.hpp"
