#pragma once

#include "graphlab/cm.hpp"
#include "graphlab/degree_sequence.hpp"
#include "graphlab/errors.hpp"
#include "graphlab/experiment.hpp"
#include "graphlab/graph.hpp"
#include "graphlab/hashset.hpp"
#include "graphlab/lattice.hpp"
#include "graphlab/rng.hpp"
#include "graphlab/stats.hpp"
#include "graphlab/um.hpp"
#include "graphlab/walks.hpp"
