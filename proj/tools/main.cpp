#include "spechom/cli.hpp"

int main(int argc, char** argv) { return spechom::run_cli(argc, argv); }
