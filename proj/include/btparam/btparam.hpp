#pragma once

// Umbrella header: pulls in the whole library.

#include "btparam/curve.hpp"
#include "btparam/division.hpp"
#include "btparam/dyadic.hpp"
#include "btparam/error.hpp"
#include "btparam/generators.hpp"
#include "btparam/hierarchy.hpp"
#include "btparam/io.hpp"
#include "btparam/parametrization.hpp"
#include "btparam/sampling.hpp"
#include "btparam/verification.hpp"
