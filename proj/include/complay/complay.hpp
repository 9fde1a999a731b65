#pragma once

#include "complay/graph.hpp"
#include "complay/layering.hpp"
#include "complay/bounds.hpp"
#include "complay/milp.hpp"
#include "complay/lp_format.hpp"
#include "complay/solve.hpp"
#include "complay/bench.hpp"
#include "complay/render.hpp"
