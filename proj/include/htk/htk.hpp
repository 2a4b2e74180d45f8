#pragma once

// Umbrella header: exact homology over the full d-skeleton, hypertree
// certification and enumeration, the random-complex models, the analytic
// threshold constants, and the local weak limit machinery.

#include "htk/alpha.hpp"
#include "htk/basis.hpp"
#include "htk/binomial.hpp"
#include "htk/chain.hpp"
#include "htk/complex.hpp"
#include "htk/constants.hpp"
#include "htk/exact.hpp"
#include "htk/hypertree.hpp"
#include "htk/io.hpp"
#include "htk/local_limit.hpp"
#include "htk/modular.hpp"
#include "htk/models.hpp"
#include "htk/quadrature.hpp"
#include "htk/rank.hpp"
#include "htk/rng.hpp"
#include "htk/sparse.hpp"
#include "htk/version.hpp"
