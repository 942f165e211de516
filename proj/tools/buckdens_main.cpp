#include <iostream>

#include "buckdens/cli.hpp"

int main(int argc, char** argv) { return buckdens::cli::run(argc, argv, std::cout, std::cerr); }
