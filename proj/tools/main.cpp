#include "evgof/cli.hpp"

int main(int argc, char** argv) { return evgof::cli_main(argc, argv); }
