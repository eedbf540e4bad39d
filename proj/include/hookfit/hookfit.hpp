#pragma once

#include "hookfit/analysis.hpp"
#include "hookfit/comparison.hpp"
#include "hookfit/dataset.hpp"
#include "hookfit/errors.hpp"
#include "hookfit/fitting.hpp"
#include "hookfit/kernels.hpp"
#include "hookfit/objective.hpp"
#include "hookfit/rng.hpp"
#include "hookfit/simulation.hpp"
