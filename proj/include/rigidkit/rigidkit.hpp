#pragma once

#include "rigidkit/decomposition.hpp"
#include "rigidkit/geometry.hpp"
#include "rigidkit/io.hpp"
#include "rigidkit/linalg.hpp"
#include "rigidkit/molecular.hpp"
#include "rigidkit/multigraph.hpp"
#include "rigidkit/realization.hpp"
#include "rigidkit/rigidity_matrix.hpp"
#include "rigidkit/tree_packing.hpp"
