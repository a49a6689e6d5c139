// Copyright 2026 The fxverify Authors
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

namespace fxv {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidFormat : public Error
{
public:
  using Error::Error;
};

class FormatMismatch : public Error
{
public:
  using Error::Error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

// Zero polynomials, improper transfer functions, ill-posed loops.
class DegenerateSystem : public Error
{
public:
  using Error::Error;
};

class IncompatibleProperty : public Error
{
public:
  using Error::Error;
};

// Exhaustive search space larger than the configured budget.
class BudgetExceeded : public Error
{
public:
  BudgetExceeded(std::string const &what, double space)
    : Error(what)
    , space_(space)
  {}

  double space() const noexcept
  {
    return space_;
  }

private:
  double space_;
};

class MalformedDocument : public Error
{
public:
  using Error::Error;
};

class VersionMismatch : public MalformedDocument
{
public:
  using MalformedDocument::MalformedDocument;
};

class OffGridValue : public MalformedDocument
{
public:
  using MalformedDocument::MalformedDocument;
};

}  // namespace fxv
