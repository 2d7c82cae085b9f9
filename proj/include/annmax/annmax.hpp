#pragma once

// Aggregate-max nearest neighbour queries under L1 and L2.

#include "annmax/convex_hull.hpp"
#include "annmax/delaunay.hpp"
#include "annmax/drag_index.hpp"
#include "annmax/farthest_voronoi.hpp"
#include "annmax/geometry.hpp"
#include "annmax/l1_engine.hpp"
#include "annmax/l1_fvd.hpp"
#include "annmax/l2_engine.hpp"
#include "annmax/oracle.hpp"
#include "annmax/partition_tree.hpp"
#include "annmax/predicates.hpp"
