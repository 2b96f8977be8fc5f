#include "ghostfd/app/commands.hpp"

#include <iostream>

extern char** environ;

int main(int argc, char** argv) { return ghostfd::app::run_cli(argc, argv, environ, std::cout, std::cerr); }
