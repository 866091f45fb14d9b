#pragma once

#include "fpam_exo/core.hpp"
#include "fpam_exo/default_suit.hpp"
#include "fpam_exo/design_eval.hpp"
#include "fpam_exo/fpam_model.hpp"
#include "fpam_exo/geometry.hpp"
#include "fpam_exo/gravity_comp.hpp"
#include "fpam_exo/io.hpp"
#include "fpam_exo/metrics.hpp"
#include "fpam_exo/nnls.hpp"
#include "fpam_exo/simulation.hpp"
#include "fpam_exo/statics.hpp"
#include "fpam_exo/workspace.hpp"
