#include "qcpto_cli/commands.hpp"

int main(int argc, char** argv) { return qcpto::cli::main_entry(argc, argv); }
