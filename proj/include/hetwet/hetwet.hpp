#pragma once

#include "hetwet/charging.hpp"
#include "hetwet/config.hpp"
#include "hetwet/engine.hpp"
#include "hetwet/experiment.hpp"
#include "hetwet/metrics.hpp"
#include "hetwet/mobility.hpp"
#include "hetwet/model.hpp"
#include "hetwet/protocols.hpp"
#include "hetwet/rng.hpp"
#include "hetwet/scenario.hpp"
