#include "vortexflow/cli.hpp"

int main(int argc, char** argv) { return vortexflow::cli::run(argc, argv); }
