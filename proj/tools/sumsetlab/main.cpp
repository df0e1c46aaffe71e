#include "sumsetlab/cli_reports.hpp"

int main(int argc, char** argv) { return sumset::run_command(argc, argv); }
