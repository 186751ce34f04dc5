#include "twinslice/cli/cli.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
  return twinslice::cli::runCli(argc, argv, std::cout, std::cerr);
}
