#include "cli.hpp"

int main(int argc, char** argv) { return adspread::cli::main_entry(argc, argv); }
