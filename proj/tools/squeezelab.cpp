#include "squeezelab/cli/app.hpp"

int main(int argc, char** argv) { return squeezelab::cli::run_app(argc, argv); }
