#include <iostream>

#include "basicwalk/cli.hpp"

int main(int argc, char** argv) { return basicwalk::cli::dispatch(argc, argv, std::cout, std::cerr); }
