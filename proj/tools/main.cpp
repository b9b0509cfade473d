#include "cli.hpp"

int main(int argc, char** argv) { return mfr::cli_main(argc, argv); }
