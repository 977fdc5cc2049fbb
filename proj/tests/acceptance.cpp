// One line per acceptance criterion; nonzero exit if any fails.

#include <iostream>

#include "cobordlab/acceptance.hpp"

int main() {
  int failed = 0;
  for (const auto& r : cobordlab::acceptance::run_all()) {
    std::cout << cobordlab::acceptance::format(r) << std::endl;
    failed += r.pass ? 0 : 1;
  }
  std::cout << (12 - failed) << "/12 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
