#include "cli_app.hpp"

int main(int argc, char** argv) { return schwarz::cli::run(argc, argv); }
