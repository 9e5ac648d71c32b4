#pragma once

#include "types.hpp"
#include "operators.hpp"
#include "spectral.hpp"
#include "random.hpp"
#include "product_search.hpp"
#include "edge.hpp"
#include "witness.hpp"
#include "choi.hpp"
#include "family.hpp"
#include "json_io.hpp"
#include "cli.hpp"
