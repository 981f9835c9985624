#include "helix/cli.hpp"

int main(int argc, char** argv) { return helix::run_cli(argc, argv); }
