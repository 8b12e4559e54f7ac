#ifndef PCGOPT_PCGOPT_HPP
#define PCGOPT_PCGOPT_HPP

#include "pcgopt/dense.hpp"
#include "pcgopt/error.hpp"
#include "pcgopt/experiments.hpp"
#include "pcgopt/lanczos.hpp"
#include "pcgopt/matrix_market.hpp"
#include "pcgopt/optimize.hpp"
#include "pcgopt/parallel.hpp"
#include "pcgopt/pcg.hpp"
#include "pcgopt/precond.hpp"
#include "pcgopt/problems.hpp"
#include "pcgopt/rng.hpp"
#include "pcgopt/sparse.hpp"
#include "pcgopt/spectrum.hpp"
#include "pcgopt/stationary.hpp"
#include "pcgopt/stochastic.hpp"
#include "pcgopt/theorem.hpp"

#endif  // PCGOPT_PCGOPT_HPP
