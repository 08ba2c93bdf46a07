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

#ifndef SLITPORT_ERROR_HPP
#define SLITPORT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace slitport {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Register names, labels or dimensions do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A post-selected outcome has (numerically) zero probability.
class ImpossibleOutcome : public Error {
 public:
  using Error::Error;
};

/// The Fock truncation is too small for the states it has to hold.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace slitport

#endif  // SLITPORT_ERROR_HPP
