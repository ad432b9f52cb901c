#include "jdisc/cli.hpp"

int main(int argc, char** argv) { return jdisc::cli::run(argc, argv); }
