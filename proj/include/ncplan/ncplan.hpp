#pragma once

#include "ncplan/builtin_topologies.hpp"
#include "ncplan/coding.hpp"
#include "ncplan/demands.hpp"
#include "ncplan/error.hpp"
#include "ncplan/exact.hpp"
#include "ncplan/experiment.hpp"
#include "ncplan/ilp.hpp"
#include "ncplan/paths.hpp"
#include "ncplan/plan.hpp"
#include "ncplan/planner.hpp"
#include "ncplan/survivability.hpp"
#include "ncplan/topology.hpp"
#include "ncplan/validate.hpp"
#include "ncplan/wavelength.hpp"
