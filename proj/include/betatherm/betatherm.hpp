// Umbrella header.
#pragma once

#include "betatherm/beta.hpp"
#include "betatherm/bilateral.hpp"
#include "betatherm/errors.hpp"
#include "betatherm/involution.hpp"
#include "betatherm/job.hpp"
#include "betatherm/orbit.hpp"
#include "betatherm/pipeline.hpp"
#include "betatherm/potential.hpp"
#include "betatherm/sequence.hpp"
#include "betatherm/transfer.hpp"
#include "betatherm/word.hpp"
#include "betatherm/zerotemp.hpp"
