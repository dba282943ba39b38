#include "splinets/cli.hpp"

int main(int argc, char** argv) { return splinets::run_cli(argc, argv); }
