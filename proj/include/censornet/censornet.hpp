#pragma once

// Umbrella header for the censornet library.

#include "censornet/censoring.hpp"
#include "censornet/config.hpp"
#include "censornet/errors.hpp"
#include "censornet/inference.hpp"
#include "censornet/montecarlo.hpp"
#include "censornet/netgen.hpp"
#include "censornet/oracle.hpp"
#include "censornet/random.hpp"
#include "censornet/records.hpp"
#include "censornet/sociomatrix.hpp"
#include "censornet/student_t.hpp"
#include "censornet/summary.hpp"
#include "censornet/trait_process.hpp"
#include "censornet/types.hpp"
#include "censornet/version.hpp"
