#ifndef NEURONPG_NEURONPG_HPP
#define NEURONPG_NEURONPG_HPP

#include "neuronpg/arm.hpp"
#include "neuronpg/config.hpp"
#include "neuronpg/experiment.hpp"
#include "neuronpg/grid.hpp"
#include "neuronpg/neuron.hpp"
#include "neuronpg/output.hpp"
#include "neuronpg/policy.hpp"
#include "neuronpg/report.hpp"
#include "neuronpg/reward.hpp"
#include "neuronpg/rng.hpp"
#include "neuronpg/stats.hpp"
#include "neuronpg/sweep.hpp"
#include "neuronpg/version.hpp"

#endif  // NEURONPG_NEURONPG_HPP
