#pragma once

#include <ostream>
#include <string>

namespace ow::acceptance {

// Runs every acceptance criterion whose name contains `filter` (all when
// empty), printing one PASS/FAIL line per criterion. Returns true when all
// selected criteria pass.
bool run_suite(std::ostream& os, const std::string& filter = "");

}  // namespace ow::acceptance
