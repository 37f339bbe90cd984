#include "higcn/cli.hpp"

int main(int argc, char** argv) { return higcn::cli::run(argc, argv); }
