#pragma once

// Umbrella header for the whole library.

#include "sogm/common/error.hpp"
#include "sogm/common/io_util.hpp"
#include "sogm/common/kmeans.hpp"
#include "sogm/common/log.hpp"
#include "sogm/common/parallel.hpp"
#include "sogm/common/rng.hpp"
#include "sogm/core/grid.hpp"
#include "sogm/core/grid_io.hpp"
#include "sogm/core/probability.hpp"
#include "sogm/eval/baselines.hpp"
#include "sogm/eval/metrics.hpp"
#include "sogm/hmm/baum_welch.hpp"
#include "sogm/hmm/forward_backward.hpp"
#include "sogm/hmm/gmm.hpp"
#include "sogm/hmm/hierarchical.hpp"
#include "sogm/hmm/init.hpp"
#include "sogm/hmm/model.hpp"
#include "sogm/hmm/model_io.hpp"
#include "sogm/hmm/viterbi.hpp"
#include "sogm/pipeline/experiment.hpp"
#include "sogm/pipeline/experiment_io.hpp"
#include "sogm/pipeline/plot.hpp"
#include "sogm/pipeline/trajectory.hpp"
#include "sogm/seg/segmentation_io.hpp"
#include "sogm/seg/supercell.hpp"
#include "sogm/sim/curves.hpp"
#include "sogm/sim/dataset.hpp"
#include "sogm/sim/scene.hpp"
#include "sogm/sim/scene_io.hpp"
#include "sogm/version.hpp"
