#include <iostream>

#include "dbeq/cli.hpp"

int main(int argc, char** argv) {
    return dbeq::cli::dbeq_main(argc, argv, std::cout, std::cerr);
}
