#pragma once

#include "sfmkit/error.hpp"
#include "sfmkit/graph.hpp"
#include "sfmkit/system.hpp"
#include "sfmkit/analysis.hpp"
#include "sfmkit/design.hpp"
#include "sfmkit/validation.hpp"
#include "sfmkit/numeric.hpp"
#include "sfmkit/io.hpp"
