#pragma once

#include "gml/expression.hpp"
#include "gml/io.hpp"
#include "gml/line_bvp.hpp"
#include "gml/oracle.hpp"
#include "gml/polar.hpp"
#include "gml/polynomial.hpp"
#include "gml/problem.hpp"
#include "gml/proximal.hpp"
#include "gml/stencil.hpp"
#include "gml/sweep.hpp"
