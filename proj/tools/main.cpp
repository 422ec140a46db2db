#include "e1lab/cli/app.hpp"

int main(int argc, char** argv) { return e1lab::cli::run(argc, argv); }
