#include "phonopt/report.hpp"

int main(int argc, char** argv) { return phonopt::cli::run_cli(argc, argv); }
