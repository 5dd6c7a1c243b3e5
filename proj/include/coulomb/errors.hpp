// Copyright 2026 The coulombgas Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace coulomb {

// Base class for all numeric failures raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergence : Error {
  using Error::Error;
};
struct OutsideDomain : Error {
  using Error::Error;
};
struct NoGap : Error {
  using Error::Error;
};
struct NotConverged : Error {
  using Error::Error;
};
struct MassMismatch : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct OutsideGap : Error {
  using Error::Error;
};
struct IllConditioned : Error {
  using Error::Error;
};
struct BadGeometry : Error {
  using Error::Error;
};
struct QuadratureFailure : Error {
  using Error::Error;
};
struct RegimeError : Error {
  using Error::Error;
};
struct BranchError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace coulomb
