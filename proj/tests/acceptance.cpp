// Copyright 2026 The ecpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ecpsim/verify.hpp"

namespace {

std::string slurp(const char* path) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "cannot read %s\n", path);
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  using namespace ecpsim;
  const std::string ecp1 = slurp(ECPSIM_CIRCUIT_DIR "/ecp1.ecp");
  const std::string ecp2 = slurp(ECPSIM_CIRCUIT_DIR "/ecp2.ecp");
  verify::Options o;
  o.ecp1_text = ecp1;
  o.ecp2_text = ecp2;

  int failed = 0;
  for (const auto& c : verify::run_all(o)) {
    failed += c.passed() ? 0 : 1;
    std::printf("AC%d %s %s (%.3f s", c.id, c.passed() ? "PASS" : "FAIL", c.title.c_str(), c.seconds);
    if (c.time_limit > 0.0) std::printf(", limit %.0f s", c.time_limit);
    std::printf(")\n");
    for (const auto& cl : c.claims) {
      std::printf("    [%s] %s: reference %.17g, simulated %.17g, delta %.3g\n", verify::to_string(cl.verdict).c_str(),
                  cl.name.c_str(), cl.reference, cl.simulated, cl.delta());
    }
  }
  std::printf("%s\n", failed == 0 ? "all criteria passed" : "some criteria FAILED");
  return failed == 0 ? 0 : 1;
}
