#include "cqft/cli.hpp"

int main(int argc, char** argv) { return cqft::cli::run(argc, argv); }
