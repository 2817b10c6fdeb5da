#include "fohl/cli.hpp"

int main(int argc, char** argv) { return fohl::runCli(argc, argv); }
