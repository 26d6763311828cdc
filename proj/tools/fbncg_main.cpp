#include "fbn/cli.hpp"

int main(int argc, char** argv) { return fbn::cli::main_impl(argc, argv); }
