#include "mind/cli.hpp"

int main(int argc, char** argv) { return mind::run_command(argc, argv); }
