#include "typeproj/cli.hpp"

int main(int argc, char** argv) { return typeproj::cli::main(argc, argv); }
