#include <iostream>

#include "rache/cli.hpp"

int main(int argc, char** argv) {
  return rache::cli::run(argc, argv, std::cout, std::cerr);
}
