#include "varembed/cli.hpp"

int main(int argc, char** argv) { return varembed::cli::run(argc, argv); }
