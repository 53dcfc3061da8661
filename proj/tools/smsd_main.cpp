#include <string>
#include <vector>

#include "smsd/cli.hpp"

int main(int argc, char** argv) {
    return smsd::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
