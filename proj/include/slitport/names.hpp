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

#ifndef SLITPORT_NAMES_HPP
#define SLITPORT_NAMES_HPP

#include <string>
#include <string_view>

namespace slitport {

// An atom X owns up to two registers: "X.path" (created when it is split
// by a screen) and "X.internal" (created when it first enters the
// apparatus). A cavity owns one mode register named after the cavity.

inline std::string path_register(std::string_view atom) { return std::string(atom) + ".path"; }
inline std::string internal_register(std::string_view atom) { return std::string(atom) + ".internal"; }

/// Identifiers used by the built-in teleportation scenario.
namespace scenario {
inline constexpr std::string_view kCavity1 = "C1";
inline constexpr std::string_view kCavity2 = "C2";
inline constexpr std::string_view kSlit1 = "zeta1";
inline constexpr std::string_view kSlit2 = "zeta2";
inline constexpr std::string_view kProbe1 = "A51";
inline constexpr std::string_view kProbe2 = "A52";
}  // namespace scenario

}  // namespace slitport

#endif  // SLITPORT_NAMES_HPP
