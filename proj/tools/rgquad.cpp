#include "rgquad/cli.hpp"

int main(int argc, char** argv) { return rgquad::cli::run(argc, argv); }
