#include "mshom/cli.hpp"

int main(int argc, char** argv) { return mshom::cli::main_entry(argc, argv); }
