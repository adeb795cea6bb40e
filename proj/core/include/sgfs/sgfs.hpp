#pragma once

#include "sgfs/baselines.hpp"
#include "sgfs/data.hpp"
#include "sgfs/eval.hpp"
#include "sgfs/model.hpp"
#include "sgfs/projection.hpp"
#include "sgfs/rng.hpp"
#include "sgfs/solvers.hpp"
