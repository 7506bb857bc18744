#include "relkit/cli.hpp"

int main(int argc, char** argv) { return relkit::cli::run(argc, argv); }
