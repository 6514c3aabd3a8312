#include "iwf/cli_app.hpp"

int main(int argc, char** argv) { return iwf::run_cli(argc, argv); }
