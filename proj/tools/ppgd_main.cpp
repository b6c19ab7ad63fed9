#include <string>
#include <vector>

#include "ppgd/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ppgd::cli::run_app(std::move(args));
}
