#include "facecue/cli.hpp"

int main(int argc, char** argv) { return facecue::cli::run(argc, argv); }
