#include <iostream>

#include <primc/cli.hpp>

int main(int argc, char** argv) { return primc::cli::main_entry(argc, argv, std::cout, std::cerr); }
