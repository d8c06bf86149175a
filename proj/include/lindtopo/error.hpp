// Copyright 2026 The lindtopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lindtopo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physics-level precondition does not hold: a dissipator sitting on a
/// phase boundary, an undamped mode, an exceptional point, a pure mode where
/// a logarithm is needed, and so on.
class PhysicsError : public Error {
public:
    using Error::Error;
};

/// Malformed input that never reached the physics: odd matrix dimensions,
/// shape mismatches, invalid parameters.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

namespace detail {

[[noreturn]] inline void throw_physics(const std::string& what) { throw PhysicsError(what); }
[[noreturn]] inline void throw_invalid(const std::string& what) { throw InvalidArgument(what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) throw_invalid(what);
}

}  // namespace detail
}  // namespace lindtopo
