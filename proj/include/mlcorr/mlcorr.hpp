// mlcorr.hpp
// Umbrella header.

#pragma once
#include "mlcorr/bound_chain.hpp"
#include "mlcorr/cache.hpp"
#include "mlcorr/correlation.hpp"
#include "mlcorr/dynamics.hpp"
#include "mlcorr/error.hpp"
#include "mlcorr/fft.hpp"
#include "mlcorr/gowers.hpp"
#include "mlcorr/io.hpp"
#include "mlcorr/numeric.hpp"
#include "mlcorr/parallel.hpp"
#include "mlcorr/phase.hpp"
#include "mlcorr/random.hpp"
#include "mlcorr/runner.hpp"
#include "mlcorr/sequence.hpp"
#include "mlcorr/sieve.hpp"
#include "mlcorr/spectral.hpp"
#include "mlcorr/verify.hpp"
