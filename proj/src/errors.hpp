// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <stdexcept>
#include <string>

namespace mmbeam {

enum class ErrorCode
{
    domain = 1,
    infeasible,
    singular,
    internal,
    io
};

/// Base of every exception thrown by the core. The C API maps `code()` onto
/// its status values.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

class DomainError : public Error
{
  public:
    explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

/// Which half of the sweep-trigger lower bound was violated.
enum class UthBound
{
    shrinkage,         // u_comm <= u_th
    nonnegative_beams  // omega_1 >= 0
};

class InfeasibleError : public Error
{
  public:
    InfeasibleError(const std::string& what, UthBound bound)
        : Error(ErrorCode::infeasible, what), bound_(bound)
    {
    }
    explicit InfeasibleError(const std::string& what)
        : Error(ErrorCode::infeasible, what)
    {
    }

    UthBound bound() const noexcept { return bound_; }

  private:
    UthBound bound_ = UthBound::shrinkage;
};

class SingularError : public Error
{
  public:
    explicit SingularError(const std::string& what) : Error(ErrorCode::singular, what) {}
};

class InternalError : public Error
{
  public:
    explicit InternalError(const std::string& what) : Error(ErrorCode::internal, what) {}
};

class IoError : public Error
{
  public:
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

}  // namespace mmbeam
