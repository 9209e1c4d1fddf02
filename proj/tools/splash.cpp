#include "splash/cli.hpp"

int main(int argc, char** argv) { return splash::cli::main(argc, argv); }
