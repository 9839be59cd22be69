#include "topk/cli.hpp"

int main(int argc, char** argv) { return topk::cli_main(argc, argv); }
