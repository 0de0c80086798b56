#ifndef REALSMOOTH_REALSMOOTH_HPP
#define REALSMOOTH_REALSMOOTH_HPP

// Umbrella header: real smooth points on real algebraic and semi-algebraic
// sets via critical points of singularity-vanishing objectives, with the
// homotopy-continuation machinery that backs them.

#include "realsmooth/config.hpp"
#include "realsmooth/monomial.hpp"
#include "realsmooth/polynomial.hpp"
#include "realsmooth/poly_system.hpp"
#include "realsmooth/parse.hpp"
#include "realsmooth/rng.hpp"
#include "realsmooth/linalg.hpp"
#include "realsmooth/reduce.hpp"
#include "realsmooth/compiled.hpp"
#include "realsmooth/start_system.hpp"
#include "realsmooth/homotopy.hpp"
#include "realsmooth/solve.hpp"
#include "realsmooth/lagrange.hpp"
#include "realsmooth/polar.hpp"
#include "realsmooth/deflation.hpp"
#include "realsmooth/realdim.hpp"
#include "realsmooth/kuramoto.hpp"
#include "realsmooth/io.hpp"

#endif
