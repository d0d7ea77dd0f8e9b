#include "epigeom/cli.hpp"

int main(int argc, char** argv) { return epigeom::cli::run(argc, argv); }
