#pragma once

#include "rosenau/errors.hpp"
#include "rosenau/grid.hpp"
#include "rosenau/fft.hpp"
#include "rosenau/quadrature.hpp"
#include "rosenau/moments.hpp"
#include "rosenau/kernels.hpp"
#include "rosenau/spectral.hpp"
#include "rosenau/io.hpp"
#include "rosenau/initial_data.hpp"
#include "rosenau/wild.hpp"
#include "rosenau/metrics.hpp"
#include "rosenau/analysis.hpp"
