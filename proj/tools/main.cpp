#include <vector>

#include "rotrack/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rotrack::cli_run(args);
}
