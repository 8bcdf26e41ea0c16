#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return suprec::run_cli(argc, argv, std::cout, std::cerr);
}
