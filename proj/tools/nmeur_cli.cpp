#include "nmeur/cli.hpp"

int main(int argc, char** argv) { return nmeur::run_cli(argc, argv); }
