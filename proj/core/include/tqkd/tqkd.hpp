#pragma once

#include "tqkd/attack_strategy.hpp"
#include "tqkd/detector_model.hpp"
#include "tqkd/evaluator.hpp"
#include "tqkd/frame_sim.hpp"
#include "tqkd/optics_budget.hpp"
#include "tqkd/rng.hpp"
#include "tqkd/sarg04.hpp"
#include "tqkd/states.hpp"
