#include "su11/cli.hpp"

int main(int argc, char** argv) { return su11::cli::main(argc, argv); }
