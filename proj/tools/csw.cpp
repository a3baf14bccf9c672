#include <iostream>

#include "csw/cli.hpp"

int main(int argc, char** argv) {
    return csw::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
