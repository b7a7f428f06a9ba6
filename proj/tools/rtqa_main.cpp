#include "rtqa/service/cli.hpp"

int main(int argc, char** argv) { return rtqa::cli::cli_main(argc, argv); }
