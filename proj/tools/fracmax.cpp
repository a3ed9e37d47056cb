#include <iostream>

#include "fracmax/cli.hpp"

int main(int argc, char** argv) {
  return fracmax::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
