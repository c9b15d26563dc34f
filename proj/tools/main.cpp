#include "gauge_mpv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gauge_mpv::cli_main(argc, argv, std::cout, std::cerr); }
