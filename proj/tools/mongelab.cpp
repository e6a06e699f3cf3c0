#include "mongelab/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return mongelab::cli::run(argc, argv, std::cout, std::cerr);
}
