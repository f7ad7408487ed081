#pragma once

// Umbrella header.

#include "gossamer/assumptions.hpp"
#include "gossamer/chain.hpp"
#include "gossamer/coeff.hpp"
#include "gossamer/engine.hpp"
#include "gossamer/errors.hpp"
#include "gossamer/expr.hpp"
#include "gossamer/limit.hpp"
#include "gossamer/numeric.hpp"
#include "gossamer/parser.hpp"
#include "gossamer/point.hpp"
#include "gossamer/printer.hpp"
#include "gossamer/rational.hpp"
#include "gossamer/relate.hpp"
#include "gossamer/scale.hpp"
#include "gossamer/series.hpp"
