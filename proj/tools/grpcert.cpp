#include "grpcert/cli.hpp"

int main(int argc, char** argv) { return grpcert::cli::run(argc, argv); }
