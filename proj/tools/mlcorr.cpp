#include "mlcorr/cli.hpp"

int main(int argc, char** argv) { return mlcorr::cli::main(argc, argv); }
