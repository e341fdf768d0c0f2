#include <iostream>
#include <string>

#include "sglab/acceptance.hpp"

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::string(argv[1]) == "--quick";
  int failures = sglab::run_acceptance(quick, std::cout);
  return failures == 0 ? 0 : 3;
}
