#include "kgo/cli.hpp"

int main(int argc, char** argv) { return kgo::run_cli(argc, argv); }
