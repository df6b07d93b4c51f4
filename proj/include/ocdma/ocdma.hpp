#pragma once
// Umbrella header.

#include "combinatorics.hpp"  // IWYU pragma: export
#include "system.hpp"         // IWYU pragma: export
#include "ber.hpp"            // IWYU pragma: export
#include "design.hpp"         // IWYU pragma: export
#include "allocation.hpp"     // IWYU pragma: export
#include "reporting.hpp"      // IWYU pragma: export
