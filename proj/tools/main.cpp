#include "surv/cli.hpp"

int main(int argc, char** argv) { return surv::run_command(argc, argv); }
