#include "dntr/cli.hpp"

int main(int argc, char** argv) { return dntr::cli::run(argc, argv); }
