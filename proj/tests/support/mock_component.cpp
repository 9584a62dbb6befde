// Scripted stand-in for an external component. argv[1] names a script with
// one step per line:
//   recv              read one message line (fails on end of input)
//   send <json>       write the line as is
//   return_result     return the value of the last message read
//   garbage           write a line that is not a protocol message
//   exit <code>       exit immediately
//   sleep <ms>
// Blank lines and lines starting with '#' are skipped.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "json.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: mock_component SCRIPT\n";
    return 2;
  }
  std::ifstream script(argv[1]);
  if (!script) {
    std::cerr << "mock_component: cannot read " << argv[1] << '\n';
    return 2;
  }
  std::string last;
  std::string step;
  while (std::getline(script, step)) {
    if (step.empty() || step[0] == '#') continue;
    auto space = step.find(' ');
    std::string op = step.substr(0, space);
    std::string arg = space == std::string::npos ? "" : step.substr(space + 1);
    if (op == "recv") {
      if (!std::getline(std::cin, last)) return 4;
    } else if (op == "send") {
      std::cout << arg << '\n' << std::flush;
    } else if (op == "return_result") {
      auto msg = nlohmann::ordered_json::parse(last);
      nlohmann::ordered_json ret{{"op", "return"}, {"value", msg.at("value")}};
      std::cout << ret.dump() << '\n' << std::flush;
    } else if (op == "garbage") {
      std::cout << "%% this is not a message\n" << std::flush;
    } else if (op == "exit") {
      return std::stoi(arg);
    } else if (op == "sleep") {
      std::this_thread::sleep_for(std::chrono::milliseconds(std::stoi(arg)));
    } else {
      std::cerr << "mock_component: unknown step '" << op << "'\n";
      return 2;
    }
  }
  return 0;
}
