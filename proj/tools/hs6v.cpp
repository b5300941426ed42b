#include <string>
#include <vector>

#include "hs6v/cli.hpp"

int main(int argc, char** argv) { return hs6v::cli::run(std::vector<std::string>(argv, argv + argc)); }
