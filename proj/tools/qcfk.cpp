// qcfk <mode> [options]: estimator tables and adaptive runs for the FK chain.

#include <fstream>
#include <iostream>

#include "qcfk/bench.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  qcfk::RunSpec spec;
  try {
    spec = qcfk::parse_run_spec(args);
  } catch (const qcfk::help_requested& h) {
    std::cout << h.what();
    return 0;
  } catch (const qcfk::usage_error& e) {
    std::cerr << "qcfk: " << e.what() << "\nRun 'qcfk --help' for usage.\n";
    return 2;
  }
  try {
    const auto out = qcfk::render(spec, qcfk::run_command(spec));
    if (spec.out_path.empty()) {
      std::cout << out;
    } else {
      std::ofstream f(spec.out_path);
      if (!f) {
        std::cerr << "qcfk: cannot write " << spec.out_path << "\n";
        return 1;
      }
      f << out;
    }
  } catch (const qcfk::invalid_input& e) {
    std::cerr << "qcfk: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qcfk: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
