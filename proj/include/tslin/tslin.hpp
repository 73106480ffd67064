#pragma once

#include "tslin/bench/grid.hpp"
#include "tslin/bench/report.hpp"
#include "tslin/core/errors.hpp"
#include "tslin/core/finite_diff.hpp"
#include "tslin/core/gelu.hpp"
#include "tslin/core/matrix.hpp"
#include "tslin/core/rng.hpp"
#include "tslin/core/tensor3.hpp"
#include "tslin/data/csv.hpp"
#include "tslin/data/dataset.hpp"
#include "tslin/data/series.hpp"
#include "tslin/data/synth.hpp"
#include "tslin/models/checkpoint.hpp"
#include "tslin/models/config.hpp"
#include "tslin/models/decompose.hpp"
#include "tslin/models/param_set.hpp"
#include "tslin/models/predictor.hpp"
#include "tslin/revin.hpp"
#include "tslin/train/adam.hpp"
#include "tslin/train/metrics.hpp"
#include "tslin/train/trainer.hpp"
