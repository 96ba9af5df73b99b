#include "nhsym/cli.hpp"

int main(int argc, char** argv) { return nhsym::cli::run(argc, argv); }
