#include "femf/cli.hpp"

int main(int argc, char **argv) { return femf::cli::run(argc, argv); }
