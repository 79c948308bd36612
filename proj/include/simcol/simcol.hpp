#pragma once

#include "simcol/errors.hpp"
#include "simcol/rational.hpp"
#include "simcol/rng.hpp"
#include "simcol/graph.hpp"
#include "simcol/dynamics.hpp"
#include "simcol/color_scheme.hpp"
#include "simcol/coupling.hpp"
#include "simcol/certify.hpp"
#include "simcol/oracle.hpp"
