// Copyright 2026 The Slitport Authors
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

// Generators of valid scripts and fixtures of malformed lines, shared by
// the script tests and the acceptance runner.

#ifndef SLITPORT_TESTS_SCRIPT_FUZZ_HPP
#define SLITPORT_TESTS_SCRIPT_FUZZ_HPP

#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slitport/oracle.hpp"
#include "slitport/script.hpp"
#include "support.hpp"

namespace slitport::script {

// Random but valid scripts: names, number formats, kernels and steps vary.
inline std::string fuzzed_script(int seed) {
  testing::rng().seed(static_cast<std::uint64_t>(seed) * 7919 + 1);
  auto pick = [](int n) { return static_cast<int>(testing::uniform(0, n - 1e-9)); };
  auto number = [&](double x) {
    switch (pick(3)) {
      case 0: return format_complex(x);
      case 1: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x);
        return std::string(buf);
      }
      default: return format_complex({x, testing::uniform(-0.5, 0.5)});
    }
  };
  auto angle = [&]() {
    switch (pick(4)) {
      case 0: return std::string("pi");
      case 1: return "pi/" + std::to_string(1 + pick(12));
      case 2: return std::string("$gt");
      default: return format_complex(testing::uniform(-4, 4));
    }
  };
  std::ostringstream out;
  const auto v = testing::random_vector(2);
  if (pick(2)) out << "config cb " << format_complex(v[0]) << "\nconfig cc " << format_complex(v[1]) << '\n';
  if (pick(2)) out << "config gt " << (pick(2) ? "pi/" + std::to_string(1 + pick(9)) : format_complex(testing::uniform(0, 2))) << '\n';
  out << "config alpha " << format_complex(testing::uniform(0.2, 1.5)) << "\n";
  out << "config truncation " << 70 + pick(10) << "\n";

  const int cavities = 2 + pick(2);
  for (int c = 0; c < cavities; ++c) {
    out << "cavity Cav" << c << " alpha " << (pick(2) ? "$alpha" : number(testing::uniform(0, 1.2)));
    if (pick(2)) out << " truncation " << (pick(2) ? "$truncation" : "80");
    out << '\n';
  }
  out << "screen S0 left right\n";
  const int extra = 1 + pick(3);
  std::vector<int> sizes;
  for (int s = 1; s <= extra; ++s) {
    sizes.push_back(1 + pick(3));
    out << "screen S" << s;
    for (int k = 0; k < sizes.back(); ++k) out << " p" << s << '_' << k;
    out << '\n';
  }
  const int first = pick(cavities);
  out << "bind S0 left Cav" << first << "\nbind S0 right Cav" << (first + 1) % cavities << '\n';
  for (int s = 1; s <= extra; ++s) {
    out << "kernel K" << s << " S0 S" << s << " [";
    const int rows = sizes[static_cast<std::size_t>(s - 1)];
    for (int r = 0; r < rows; ++r) {
      if (r) out << "; ";
      out << number(testing::uniform(-1, 1) / rows / 1.5) << ' ' << number(testing::uniform(-1, 1) / rows / 1.5);
    }
    out << "]\n";
  }
  const int atoms = 1 + pick(3);
  const char* levels[] = {"a", "b", "c"};
  for (int a = 0; a < atoms; ++a) {
    out << "atom At" << a << " lambda3 state " << (pick(3) == 0 ? "input" : levels[pick(3)]) << '\n';
    out << "split At" << a << " S0\npass At" << a << " S0 phi " << angle() << '\n';
    if (pick(2)) out << "checkpoint " << to_string(all_checkpoints()[static_cast<std::size_t>(pick(17))]) << '\n';
    if (pick(2)) out << "detect At" << a << " internal " << levels[pick(3)] << '\n';
    const int s = 1 + pick(extra);
    if (pick(2)) {
      out << "propagate At" << a << " K" << s << '\n';
      out << "detect At" << a << " position p" << s << '_' << pick(sizes[static_cast<std::size_t>(s - 1)]) << '\n';
    } else {
      out << "detect At" << a << " position " << (pick(2) ? "left" : "right") << '\n';
    }
  }
  out << "atom Probe qubit2 state " << (pick(2) ? "f" : "e") << '\n';
  out << "inject Cav0 " << (pick(2) ? "$alpha" : number(testing::uniform(-1, 1))) << '\n';
  out << "jcpass Probe Cav" << pick(cavities) << " gt " << angle() << '\n';
  out << "detect Probe internal " << (pick(2) ? "f" : "e") << "   # probe\n";
  return out.str();
}

/// (malformed line, expected message fragment)
inline const std::vector<std::pair<std::string, std::string>>& malformed_fixtures() {
  static const std::vector<std::pair<std::string, std::string>> fixtures = {
      {"frobnicate A1", "unknown command 'frobnicate'"},
      {"cavity C9 alpha", "wrong number of arguments"},
      {"cavity C9 beta 2", "expected 'alpha'"},
      {"cavity C9 alpha two", "malformed value 'two'"},
      {"cavity C9 alpha 2 truncation", "wrong number of arguments"},
      {"cavity C9 alpha 2 trunc 8", "expected 'truncation'"},
      {"atom A9 lambda4 state b", "unknown atom kind 'lambda4'"},
      {"atom A9 lambda3 b", "wrong number of arguments"},
      {"screen S9", "wrong number of arguments"},
      {"screen S-9 z1", "invalid name 'S-9'"},
      {"kernel K9 S S", "missing matrix literal"},
      {"kernel K9 S S [1 0; 0]", "ragged matrix rows"},
      {"kernel K9 S S [1 x]", "malformed matrix entry 'x'"},
      {"kernel K9 S S [1 0", "must end with ']'"},
      {"kernel K9 S S [1 0;]", "empty matrix row"},
      {"pass A1 S phi", "wrong number of arguments"},
      {"pass A1 S theta pi", "expected 'phi'"},
      {"pass A1 S phi pi/0", "malformed value 'pi/0'"},
      {"detect A1 inside b", "expected 'internal' or 'position'"},
      {"jcpass P C1 gt", "wrong number of arguments"},
      {"config colour blue", "unknown config key 'colour'"},
      {"checkpoint", "wrong number of arguments"},
      {"inject C1 1+", "malformed value '1+'"},
  };
  return fixtures;
}

}  // namespace slitport::script

#endif  // SLITPORT_TESTS_SCRIPT_FUZZ_HPP
