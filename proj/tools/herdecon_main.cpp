#include "herdecon/cli.hpp"

int main(int argc, char** argv) { return herdecon::run_cli(argc, argv); }
