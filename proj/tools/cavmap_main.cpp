#include "cavmap/cli.hpp"

int main(int argc, char** argv) { return cavmap::cli::dispatch(argc, argv); }
