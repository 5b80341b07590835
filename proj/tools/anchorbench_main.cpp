#include "anchorbench/cli.hpp"

int main(int argc, char** argv) { return anchorbench::run_cli(argc, argv); }
