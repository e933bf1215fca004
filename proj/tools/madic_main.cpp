#include "madic/cli.hpp"

int main(int argc, char** argv) { return madic::cli::main_entry(argc, argv); }
