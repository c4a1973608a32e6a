#include <iostream>

#include "gridhull/cli.hpp"

int main(int argc, char** argv) { return gridhull::run_cli(argc, argv, std::cout, std::cerr); }
