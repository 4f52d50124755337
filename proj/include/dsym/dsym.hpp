#pragma once

#include "arith.hpp"
#include "constants.hpp"
#include "counting.hpp"
#include "fiber.hpp"
#include "rational.hpp"
#include "sl2z.hpp"
#include "surface.hpp"
