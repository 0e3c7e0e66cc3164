#pragma once

#include "amenlab/config.hpp"
#include "amenlab/constructions.hpp"
#include "amenlab/error.hpp"
#include "amenlab/group.hpp"
#include "amenlab/lattice.hpp"
#include "amenlab/measures.hpp"
#include "amenlab/metrics.hpp"
#include "amenlab/random.hpp"
#include "amenlab/rational.hpp"
#include "amenlab/transport.hpp"

namespace amenlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace amenlab
