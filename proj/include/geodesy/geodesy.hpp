#pragma once

// Umbrella header.

#include "geodesy/numeric.hpp"
#include "geodesy/space.hpp"
#include "geodesy/standard_spaces.hpp"
#include "geodesy/proper_function.hpp"
#include "geodesy/correspondence.hpp"
#include "geodesy/transport.hpp"
#include "geodesy/gromov_wasserstein.hpp"
#include "geodesy/interpolation.hpp"
