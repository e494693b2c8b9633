#include <string>
#include <vector>

#include "ddestab/cli.hpp"

int main(int argc, char** argv) {
  return ddestab::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
