// Entry point for the pulsetool binary.
#include "pulses/cli.hpp"

int main(int argc, char** argv) { return pulses::cli::run(argc, argv); }
