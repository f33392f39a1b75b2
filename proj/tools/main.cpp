#include "swarmix/cli.hpp"

int main(int argc, char** argv) { return swarmix::cli::main(argc, argv); }
