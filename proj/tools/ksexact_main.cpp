#include <iostream>

#include "ksexact/cli.hpp"

int main(int argc, char** argv) {
    return ksexact::cli::run_cli(argc, argv, std::cout, std::cerr);
}
