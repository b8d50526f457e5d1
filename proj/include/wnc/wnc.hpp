#pragma once

#include "wnc/certificates.hpp"
#include "wnc/dentability.hpp"
#include "wnc/errors.hpp"
#include "wnc/harness.hpp"
#include "wnc/operators.hpp"
#include "wnc/options.hpp"
#include "wnc/pointset.hpp"
#include "wnc/profiles.hpp"
#include "wnc/rational.hpp"
#include "wnc/rng.hpp"
#include "wnc/serialize.hpp"
#include "wnc/sets.hpp"
#include "wnc/solvers.hpp"
#include "wnc/spaces.hpp"
