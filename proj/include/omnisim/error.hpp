// SPDX-License-Identifier: Apache-2.0
//
// omnisim: simulator and optimizer for intelligent omni-surface assisted links
// Copyright (C) 2026 The omnisim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OMNISIM_ERROR_HPP
#define OMNISIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace omnisim
{

/// Broad failure class. Each maps onto one CLI exit code.
enum class ErrorKind
{
    Validation, ///< bad input: scene, table, config, flags (exit 2)
    Numerical,  ///< rank deficiency, degenerate geometry at evaluation time (exit 3)
    Guard       ///< refused because the request exceeds a hard limit (exit 4)
};

/// Base of every exception thrown by the library.
/// `code()` is a short machine-readable identifier such as "side_undefined".
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, std::string code, const std::string &message)
        : std::runtime_error(message), kind_(kind), code_(std::move(code))
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    const std::string &code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

struct ValidationError : Error
{
    explicit ValidationError(const std::string &message, std::string code = "validation")
        : Error(ErrorKind::Validation, std::move(code), message)
    {
    }
};

/// A point lies in the panel plane, so reflection/refraction is undefined.
struct SideUndefinedError : ValidationError
{
    explicit SideUndefinedError(const std::string &message) : ValidationError(message, "side_undefined") {}
};

/// The scene itself is inconsistent (e.g. BS in the panel plane).
struct InvalidSceneError : ValidationError
{
    explicit InvalidSceneError(const std::string &message) : ValidationError(message, "invalid_scene") {}
};

struct StateIndexError : ValidationError
{
    explicit StateIndexError(const std::string &message) : ValidationError(message, "state_out_of_range") {}
};

/// More users than BS antennas; zero-forcing cannot separate them.
struct TooManyUsersError : Error
{
    explicit TooManyUsersError(const std::string &message)
        : Error(ErrorKind::Numerical, "too_many_users_for_zf", message)
    {
    }
};

/// H*H^H is singular or its condition number exceeds the ZF limit.
struct RankError : Error
{
    explicit RankError(const std::string &message) : Error(ErrorKind::Numerical, "rank_deficient", message) {}
};

struct NumericalError : Error
{
    explicit NumericalError(const std::string &message, std::string code = "numerical")
        : Error(ErrorKind::Numerical, std::move(code), message)
    {
    }
};

struct SearchSpaceTooLargeError : Error
{
    explicit SearchSpaceTooLargeError(const std::string &message)
        : Error(ErrorKind::Guard, "search_space_too_large", message)
    {
    }
};

} // namespace omnisim

#endif
