#include "nanoforce/cli.hpp"

int main(int argc, char** argv) { return nanoforce::cli::run(argc, argv); }
