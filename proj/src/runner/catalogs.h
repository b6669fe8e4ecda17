#pragma once

#include <memory>

#include "calculus/contour.h"
#include "geometry/boundary_graph.h"
#include "geometry/pullback.h"
#include "runner/config.h"
#include "spaces/grid.h"
#include "spaces/norms.h"

namespace flatcal {

std::shared_ptr<const BoundaryGraph> boundary_from_config(const Config& cfg);
HalfSpaceGrid grid_from_config(const Config& cfg);
NormSpec normspec_from_config(const Config& cfg);
ContourSpec contour_from_config(const Config& cfg);
PullbackConfig pullback_from_config(const Config& cfg);
BcKind bc_from_config(const Config& cfg);

}  // namespace flatcal
