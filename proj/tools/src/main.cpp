#include "gsqr_tools/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return gsqr::tools::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
