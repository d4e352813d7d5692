#include "nng_tools/cli.hpp"

#include <iostream>

int main(int argc, char* argv[])
{
    return nng::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
