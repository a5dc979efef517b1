#include "chanalyze/cli.hpp"

int main(int argc, char** argv) { return chanalyze::cli::dispatch(argc, argv); }
