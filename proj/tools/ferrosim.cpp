#include "ferro/config.hpp"

int main(int argc, char** argv) { return ferro::cli_main(argc, argv); }
