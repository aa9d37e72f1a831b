// Acceptance driver: one PASS/FAIL line per criterion on stdout.
//   acceptance [--threads N] [id ...]
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "seqvote/acceptance.hpp"

int main(int argc, char** argv) {
  seqvote::AcceptanceOptions opt;
  opt.log = &std::cerr;
  for (int j = 1; j < argc; ++j) {
    const std::string arg = argv[j];
    if (arg == "--threads" && j + 1 < argc) {
      opt.threads = std::atoi(argv[++j]);
    } else {
      opt.only.push_back(arg);
    }
  }
  bool all = true;
  for (const auto& r : seqvote::run_acceptance(opt)) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.title
              << " [" << r.seconds << " s] " << r.detail << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
