#pragma once

#include "modcat/types.hpp"
#include "modcat/mtc_core.hpp"
#include "modcat/json_io.hpp"
#include "modcat/affine_weights.hpp"
#include "modcat/families.hpp"
#include "modcat/branching.hpp"
#include "modcat/orbifold_solver.hpp"
