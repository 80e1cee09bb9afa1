#pragma once

// Umbrella header: quantization dimension machinery for Markov-type measures
// on ratio-specified graph-directed constructions.

#include "gdq/antichain.hpp"
#include "gdq/errors.hpp"
#include "gdq/geometry.hpp"
#include "gdq/graph.hpp"
#include "gdq/matrix.hpp"
#include "gdq/measure.hpp"
#include "gdq/numeric.hpp"
#include "gdq/quantizer.hpp"
#include "gdq/spectral.hpp"
#include "gdq/system.hpp"
#include "gdq/word.hpp"
