#include "cli.hpp"

int main(int argc, char** argv) { return qplab::cli_run(argc, argv); }
