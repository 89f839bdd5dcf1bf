#include "cmtag/cli.hpp"

int main(int argc, char** argv) { return cmtag::cli_main(argc, argv); }
