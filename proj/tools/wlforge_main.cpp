#include <vector>

#include "wlforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wlforge::run_command(args);
}
