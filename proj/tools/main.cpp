#include "reducebench/cli.hpp"

int main(int argc, char** argv) { return reducebench::run_cli(argc, argv); }
