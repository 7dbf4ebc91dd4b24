#pragma once

#include "sapoa/core.hpp"
#include "sapoa/world.hpp"
#include "sapoa/assembly_tree.hpp"
#include "sapoa/assignment.hpp"
#include "sapoa/target_extension.hpp"
#include "sapoa/navigation_sim.hpp"
#include "sapoa/strategies.hpp"
#include "sapoa/experiments.hpp"
#include "sapoa/continuous_nav.hpp"
