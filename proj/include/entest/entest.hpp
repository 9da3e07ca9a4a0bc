#pragma once

#include "entest/asymptote.hpp"
#include "entest/bayes.hpp"
#include "entest/errors.hpp"
#include "entest/exact.hpp"
#include "entest/half_spin.hpp"
#include "entest/local_mixing.hpp"
#include "entest/povm.hpp"
#include "entest/prior.hpp"
#include "entest/quadrature.hpp"
#include "entest/reparametrization.hpp"
#include "entest/rng.hpp"
#include "entest/simulator.hpp"
#include "entest/spin_spectrum.hpp"
#include "entest/oracle/haar.hpp"
#include "entest/oracle/linalg.hpp"
#include "entest/oracle/verify.hpp"
