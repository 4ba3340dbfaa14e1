#include "majent/cli.hpp"

int main(int argc, char** argv) { return majent::cli::run(argc, argv); }
