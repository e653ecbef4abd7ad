#pragma once

// Two-sample permutation tests for functional data.

#include "funcperm/chi_squared.hpp"
#include "funcperm/csv.hpp"
#include "funcperm/depth.hpp"
#include "funcperm/depth_rank_test.hpp"
#include "funcperm/error.hpp"
#include "funcperm/fda_core.hpp"
#include "funcperm/gbm.hpp"
#include "funcperm/hk_test.hpp"
#include "funcperm/knn_test.hpp"
#include "funcperm/meta_test.hpp"
#include "funcperm/perm_engine.hpp"
#include "funcperm/power_config.hpp"
#include "funcperm/power_study.hpp"
#include "funcperm/random.hpp"
#include "funcperm/test_result.hpp"
