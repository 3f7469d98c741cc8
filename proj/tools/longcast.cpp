#include <iostream>

#include <longcast/cli.hpp>

int main(int argc, char ** argv)
{
  return longcast::cli_main(argc, argv, std::cout, std::cerr);
}
