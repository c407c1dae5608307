#pragma once

#include "heightforge/errors.hpp"
#include "heightforge/exact_arith.hpp"
#include "heightforge/integer_factor.hpp"
#include "heightforge/finite_field.hpp"
#include "heightforge/quadratic_field.hpp"
#include "heightforge/cyclotomic.hpp"
#include "heightforge/real.hpp"
#include "heightforge/weierstrass.hpp"
#include "heightforge/reduction.hpp"
#include "heightforge/archimedean.hpp"
#include "heightforge/qseries.hpp"
#include "heightforge/heights.hpp"
#include "heightforge/torsion.hpp"
#include "heightforge/frobenius.hpp"
#include "heightforge/power_series.hpp"
#include "heightforge/formal_group.hpp"
#include "heightforge/ramified.hpp"
#include "heightforge/pipeline.hpp"
