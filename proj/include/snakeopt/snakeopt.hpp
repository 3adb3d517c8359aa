#pragma once

#include "snakeopt/core.hpp"
#include "snakeopt/gps.hpp"
#include "snakeopt/snake.hpp"
#include "snakeopt/rivals.hpp"
#include "snakeopt/benchfns.hpp"
#include "snakeopt/stats.hpp"
#include "snakeopt/harness.hpp"
#include "snakeopt/tunedemo.hpp"
