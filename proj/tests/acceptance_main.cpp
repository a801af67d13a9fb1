#include <iostream>

#include "contactwave/acceptance.hpp"

int main() {
  const cw::AcceptanceOutcome outcome = cw::run_acceptance(&std::cout);
  int bad = 0;
  for (const auto& c : outcome.criteria)
    if (!c.pass) ++bad;
  if (bad == 0) {
    std::cout << "acceptance: all " << outcome.criteria.size() << " criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << bad << " of " << outcome.criteria.size()
            << " criteria failed\n";
  return 1;
}
