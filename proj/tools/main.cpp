#include <iostream>

#include "hodegeo/cli.hpp"

int main(int argc, char** argv) {
    return hodegeo::run(argc, argv, std::cout, std::cerr);
}
