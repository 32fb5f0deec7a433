#pragma once

#include "damg/builders.hpp"
#include "damg/errors.hpp"
#include "damg/graph.hpp"
#include "damg/module.hpp"
#include "damg/path_algebra.hpp"
#include "damg/projection.hpp"
#include "damg/rational.hpp"
#include "damg/shapley.hpp"
#include "damg/value_function.hpp"
#include "damg/weights.hpp"
