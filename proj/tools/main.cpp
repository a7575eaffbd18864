#include "cochain/cli.hpp"

int main(int argc, char** argv) { return cochain::cli::run(argc, argv); }
