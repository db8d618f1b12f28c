#include <vector>

#include "pass/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pass::cli::run(args);
}
