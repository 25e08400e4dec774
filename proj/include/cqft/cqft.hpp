#pragma once

// Umbrella header for the numerical library. The command-line layer lives in
// cqft/cli.hpp and additionally needs CLI11 and nlohmann::json.

#include "cqft/errors.hpp"
#include "cqft/kinematics.hpp"
#include "cqft/quadrature.hpp"
#include "cqft/elliptic.hpp"
#include "cqft/gaussian.hpp"
#include "cqft/propagator.hpp"
#include "cqft/perturbation.hpp"
#include "cqft/statevector.hpp"
#include "cqft/gauge.hpp"
#include "cqft/renorm.hpp"
