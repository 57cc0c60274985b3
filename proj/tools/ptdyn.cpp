#include "ptdyn/cli.hpp"

int main(int argc, char** argv) { return ptdyn::cli::cli_main(argc, argv); }
