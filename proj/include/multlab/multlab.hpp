#pragma once

#include "multlab/colon_theorems.hpp"
#include "multlab/error.hpp"
#include "multlab/estimate.hpp"
#include "multlab/exponent.hpp"
#include "multlab/family.hpp"
#include "multlab/limits.hpp"
#include "multlab/monomial_ideal.hpp"
#include "multlab/newton.hpp"
#include "multlab/polytope.hpp"
#include "multlab/rational.hpp"
#include "multlab/report.hpp"
#include "multlab/saturation.hpp"
