#include "fisa/cli.hpp"

int main(int argc, char** argv) { return fisa::cli::cli_main(argc, argv); }
