#include "cellbif/cli.hpp"

int main(int argc, char** argv) { return cellbif::cli::run(argc, argv); }
