#include "dsa/cli.hpp"

int main(int argc, char** argv) { return dsa::cli::run(argc, argv); }
