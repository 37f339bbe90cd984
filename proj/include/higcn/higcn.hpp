#pragma once

// Umbrella header for the whole library.

#include "higcn/checkpoint.hpp"
#include "higcn/coauthorship.hpp"
#include "higcn/complex.hpp"
#include "higcn/config.hpp"
#include "higcn/dense.hpp"
#include "higcn/errors.hpp"
#include "higcn/fp_operator.hpp"
#include "higcn/graph.hpp"
#include "higcn/kendall.hpp"
#include "higcn/log.hpp"
#include "higcn/metrics.hpp"
#include "higcn/model.hpp"
#include "higcn/nullmodel.hpp"
#include "higcn/parallel.hpp"
#include "higcn/random.hpp"
#include "higcn/sparse.hpp"
#include "higcn/splits.hpp"
#include "higcn/sym_eigen.hpp"
#include "higcn/synthetic.hpp"
#include "higcn/tasks.hpp"
#include "higcn/wl.hpp"
