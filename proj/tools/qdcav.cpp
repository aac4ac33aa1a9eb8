#include "qdcav/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return qdcav::cli::run(argc, argv, std::cout, std::cerr);
}
