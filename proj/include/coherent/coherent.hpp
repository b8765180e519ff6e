#pragma once

#include "coherent/bounds.hpp"
#include "coherent/coherence.hpp"
#include "coherent/extremal.hpp"
#include "coherent/law.hpp"
#include "coherent/law_json.hpp"
#include "coherent/lp.hpp"
#include "coherent/polytope.hpp"
#include "coherent/rational.hpp"
