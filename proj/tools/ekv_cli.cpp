#include "ekv/cli.hpp"

int main(int argc, char** argv) { return ekv::cli_main(argc, argv); }
