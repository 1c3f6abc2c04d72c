#pragma once

#include "error.hpp"
#include "numeric.hpp"
#include "instance.hpp"
#include "partition.hpp"
#include "config.hpp"
#include "init.hpp"
#include "solver.hpp"
#include "verify.hpp"
#include "oracle.hpp"
#include "reductions.hpp"
#include "bench.hpp"
