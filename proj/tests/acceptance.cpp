// Acceptance run: one PASS/FAIL line per criterion, then the details.
// Exit status is nonzero if any gating check fails.

#include "bnf/verification.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  bnf::VerifyOptions opts;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--no-supplementary") opts.supplementary = false;
    else if (arg.rfind("--threads=", 0) == 0) opts.threads = std::atoi(arg.c_str() + 10);
  }
  bnf::Report report = bnf::run_all(opts);
  std::cout << report.to_text();
  return report.all_pass() ? 0 : 1;
}
