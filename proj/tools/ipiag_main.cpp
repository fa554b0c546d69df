#include "ipiag/cli.hpp"

int main(int argc, char** argv) { return ipiag::cli_main(argc, argv); }
