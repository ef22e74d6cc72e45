#include "p2wave/cli.hpp"

int main(int argc, char** argv) { return p2wave::cli::run(argc, argv); }
