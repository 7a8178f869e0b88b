#include "qlens/cli.hpp"

int main(int argc, char** argv) { return qlens::cli::run(argc, argv); }
