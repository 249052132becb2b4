#pragma once

#include "singseries/arith.hpp"
#include "singseries/cli.hpp"
#include "singseries/errors.hpp"
#include "singseries/gallagher.hpp"
#include "singseries/interval.hpp"
#include "singseries/prime_stream.hpp"
#include "singseries/rational.hpp"
#include "singseries/singular.hpp"
