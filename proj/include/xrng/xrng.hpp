#pragma once

#include "xrng/analysis.hpp"
#include "xrng/bigint.hpp"
#include "xrng/engines.hpp"
#include "xrng/generators.hpp"
#include "xrng/gf2.hpp"
#include "xrng/gf2_matrix.hpp"
#include "xrng/gf2_poly.hpp"
#include "xrng/hwd.hpp"
#include "xrng/scramblers.hpp"
#include "xrng/splitmix.hpp"
