#pragma once

#include "hilbert/errors.hpp"
#include "hilbert/rng.hpp"
#include "hilbert/parallel.hpp"
#include "hilbert/body.hpp"
#include "hilbert/sampling.hpp"
#include "hilbert/quadrature.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/spectral.hpp"
#include "hilbert/verify.hpp"
#include "hilbert/io.hpp"
