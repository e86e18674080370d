#pragma once

// Umbrella header.

#include "weylbound/scalar.hpp"
#include "weylbound/poly.hpp"
#include "weylbound/matfam.hpp"
#include "weylbound/minors.hpp"
#include "weylbound/echelon.hpp"
#include "weylbound/localdim.hpp"
#include "weylbound/formulas.hpp"
#include "weylbound/numeric.hpp"
#include "weylbound/chern.hpp"
#include "weylbound/spectral.hpp"
#include "weylbound/swchart.hpp"
#include "weylbound/pipeline.hpp"
