#include "qbv/cli.hpp"

int main(int argc, char** argv) { return qbv::run_cli(argc, argv); }
