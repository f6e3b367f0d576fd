#include "mgf/cli.hpp"

int main(int argc, char** argv) { return mgf::cli_dispatch(argc, argv); }
