#include "utester/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = utester::run_command(args, std::cerr);
  if (!result.message.empty()) (result.exit_code == 0 ? std::cout : std::cerr) << result.message << '\n';
  if (!result.report.command.empty()) std::cout << result.report.to_json().dump() << '\n';
  return result.exit_code;
}
