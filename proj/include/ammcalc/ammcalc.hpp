#pragma once

#include "ammcalc/adaptive.hpp"
#include "ammcalc/composition.hpp"
#include "ammcalc/curve.hpp"
#include "ammcalc/errors.hpp"
#include "ammcalc/expectation.hpp"
#include "ammcalc/measures.hpp"
#include "ammcalc/numeric.hpp"
#include "ammcalc/partition.hpp"
#include "ammcalc/quadrature.hpp"
#include "ammcalc/spec_io.hpp"
#include "ammcalc/stability.hpp"
