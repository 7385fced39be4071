// SPDX-License-Identifier: Apache-2.0
//
// cachecomp: cache-induced opportunistic CoMP simulation and optimization
// Copyright (C) 2026 The cachecomp authors
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

#ifndef CACHECOMP_ERRORS_HPP
#define CACHECOMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cachecomp
{

// Bad or inconsistent configuration (parse failures, impossible geometry).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Channel outside the feasible set, or a construction that cannot apply.
class InfeasibleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (shape mismatch, missing init).
class ContractError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

class ConvergenceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string &what)
{
    if (!cond)
        throw ContractError(what);
}

} // namespace cachecomp

#endif
