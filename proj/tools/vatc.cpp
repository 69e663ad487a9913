#include "vatc/commands.hpp"

int main(int argc, char** argv) { return vatc::run_cli(argc, argv); }
