#pragma once

#include "catassoc/association.hpp"
#include "catassoc/dataset.hpp"
#include "catassoc/equivalence.hpp"
#include "catassoc/error.hpp"
#include "catassoc/prediction.hpp"
#include "catassoc/random.hpp"
#include "catassoc/resampling.hpp"
#include "catassoc/scenarios.hpp"
#include "catassoc/selection.hpp"
