#ifndef VCSNDP_VCSNDP_HPP
#define VCSNDP_VCSNDP_HPP

#include "vcsndp/connectivity.hpp"
#include "vcsndp/cost.hpp"
#include "vcsndp/covering_lp.hpp"
#include "vcsndp/element_solver.hpp"
#include "vcsndp/errors.hpp"
#include "vcsndp/family.hpp"
#include "vcsndp/generate.hpp"
#include "vcsndp/instance.hpp"
#include "vcsndp/max_flow.hpp"
#include "vcsndp/menger_oracle.hpp"
#include "vcsndp/pipeline.hpp"
#include "vcsndp/report.hpp"
#include "vcsndp/subset_search.hpp"

#endif // VCSNDP_VCSNDP_HPP
