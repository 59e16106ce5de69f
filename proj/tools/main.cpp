#include "cli_app.hpp"

int main(int argc, char** argv) { return thzqkd::cli::run(argc, argv); }
