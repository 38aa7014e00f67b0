#include "cli.hpp"

int main(int argc, char** argv) {
    return teda::cli::run_cli(argc, argv);
}
