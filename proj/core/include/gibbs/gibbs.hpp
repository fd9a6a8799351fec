#pragma once

#include "gibbs/araki.hpp"
#include "gibbs/divergences.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/experiments.hpp"
#include "gibbs/hamiltonian.hpp"
#include "gibbs/linalg.hpp"
#include "gibbs/operator.hpp"
#include "gibbs/recovery.hpp"
#include "gibbs/rng.hpp"
