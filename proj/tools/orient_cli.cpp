#include "orient/cli.hpp"

int main(int argc, char** argv) { return orient::cli::main_entry(argc, argv); }
