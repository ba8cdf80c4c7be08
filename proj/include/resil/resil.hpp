#pragma once

#include "resil/allocation.hpp"
#include "resil/channel.hpp"
#include "resil/error.hpp"
#include "resil/metrics.hpp"
#include "resil/prediction.hpp"
#include "resil/scenario.hpp"
#include "resil/service.hpp"
#include "resil/simulator.hpp"
#include "resil/topology.hpp"
