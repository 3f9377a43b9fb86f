// Acceptance gate: runs every criterion at its pinned tolerance and prints
// one PASS/FAIL line per criterion (same suite as `oneworld verify`).

#include <iostream>
#include <string>

#include "ow/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const bool ok = ow::acceptance::run_suite(std::cout, filter);
  std::cout << (ok ? "acceptance: all criteria passed\n"
                   : "acceptance: FAILURES present\n");
  return ok ? 0 : 1;
}
