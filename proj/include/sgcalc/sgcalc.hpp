#pragma once

#include "sgcalc/bigfloat.hpp"
#include "sgcalc/coefficients.hpp"
#include "sgcalc/format.hpp"
#include "sgcalc/gasket.hpp"
#include "sgcalc/junction.hpp"
#include "sgcalc/rational.hpp"
#include "sgcalc/scalar.hpp"
#include "sgcalc/series.hpp"
#include "sgcalc/spectral.hpp"
#include "sgcalc/tables.hpp"
#include "sgcalc/verify.hpp"
