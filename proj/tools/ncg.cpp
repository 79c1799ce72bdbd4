#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "ncg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    ncg::cli::CommandResult r = ncg::cli::run(args);
    if (r.status == ncg::cli::Status::invalid_input && !r.json_output) {
      std::cerr << r.human_text;
    } else {
      std::cout << ncg::cli::render(r);
    }
    return ncg::cli::exit_code(r.status);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
