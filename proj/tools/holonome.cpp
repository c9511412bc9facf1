#include "holonome/cli.hpp"

int main(int argc, char** argv) { return holonome::cli::run(argc, argv); }
