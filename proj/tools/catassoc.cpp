#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) { return catassoc::cli::dispatch(argc, argv, std::cout, std::cerr); }
