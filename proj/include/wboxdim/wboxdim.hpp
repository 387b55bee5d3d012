#pragma once

#include "wboxdim/error.hpp"
#include "wboxdim/params.hpp"
#include "wboxdim/weierstrass.hpp"
#include "wboxdim/prefractal.hpp"
#include "wboxdim/bounds.hpp"
#include "wboxdim/box_counting.hpp"
#include "wboxdim/report.hpp"
