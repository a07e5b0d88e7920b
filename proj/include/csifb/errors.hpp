// SPDX-License-Identifier: Apache-2.0
//
// csifb: index-based CSI feedback simulation toolkit
// Copyright (C) 2026 The csifb Authors
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

#ifndef CSIFB_ERRORS_HPP
#define CSIFB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csifb
{

// Bad arguments: dimension mismatch, non-finite values, out-of-range indices.
class InvalidInput : public std::invalid_argument
{
public:
    explicit InvalidInput(const std::string &what) : std::invalid_argument(what) {}
};

// Numerically degenerate input (rank deficiency, zero vectors).
class DegenerateInput : public std::domain_error
{
public:
    explicit DegenerateInput(const std::string &what) : std::domain_error(what) {}
};

// Missing or mismatched assets (candidate sets, profiles, config files).
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

// Malformed feedback message or artifact file.
class CorruptData : public std::runtime_error
{
public:
    explicit CorruptData(const std::string &what) : std::runtime_error(what) {}
};

// File could not be opened, read or written.
class IoError : public std::runtime_error
{
public:
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace csifb

#endif
