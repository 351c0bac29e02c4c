#include "dslab/cli.hpp"

int main(int argc, char** argv) { return dslab::run(argc, argv); }
