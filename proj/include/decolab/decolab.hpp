#pragma once

#include "decolab/errors.hpp"
#include "decolab/version.hpp"

#include "decolab/core/state.hpp"
#include "decolab/core/operator.hpp"
#include "decolab/core/spin_chain.hpp"
#include "decolab/core/dicke.hpp"
#include "decolab/core/propagator.hpp"
#include "decolab/core/moments.hpp"
#include "decolab/core/fock_truncation.hpp"

#include "decolab/numeric/interpolate.hpp"

#include "decolab/spin/product_state.hpp"
#include "decolab/spin/fidelity_curve.hpp"
#include "decolab/spin/fidelity.hpp"

#include "decolab/dicke/laguerre.hpp"
#include "decolab/dicke/analytic.hpp"

#include "decolab/scaling/scaling.hpp"

#include "decolab/sampling/rational_phase.hpp"
#include "decolab/sampling/sampling.hpp"

#include "decolab/io/csv.hpp"
