#include "spikepca/cli.hpp"

int main(int argc, char** argv) { return spikepca::cli_main(argc, argv); }
