#include "stfem/cli.hpp"

int main(int argc, char** argv) { return stfem::cli::run(argc, argv); }
