#include "kp/cli.hpp"

int main(int argc, char** argv) { return kp::run_cli(argc, argv); }
