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

// Command-line front end. run_cli() is the whole program minus process
// plumbing, so tests can drive it with in-memory streams.

#ifndef SLITPORT_CLI_HPP
#define SLITPORT_CLI_HPP

#include <iosfwd>

namespace slitport {

enum ExitCode : int {
  kExitOk = 0,
  kExitBelowFidelity = 1,
  kExitInvalid = 2,
  kExitImpossible = 3,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slitport

#endif  // SLITPORT_CLI_HPP
