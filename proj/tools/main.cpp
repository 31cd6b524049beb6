#include "cli.hpp"

int main(int argc, char** argv) { return minkres::cli::run(argc, argv); }
