#pragma once

#include "commvuln/community.hpp"
#include "commvuln/errors.hpp"
#include "commvuln/graph.hpp"
#include "commvuln/metrics.hpp"
#include "commvuln/parallel.hpp"
#include "commvuln/rng.hpp"
#include "commvuln/sensitivity.hpp"
#include "commvuln/serialize.hpp"
#include "commvuln/vulnerability.hpp"
