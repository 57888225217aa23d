// Copyright 2026 The polycbf Authors
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

#ifndef POLYCBF__ERRORS_HPP_
#define POLYCBF__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace polycbf
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Geometry
class DegenerateSegment : public Error
{
public:
  using Error::Error;
};

class EmptyBoundary : public Error
{
public:
  using Error::Error;
};

// Raised when the distance field yields NaN/inf derivatives at a circle center.
class NonFiniteField : public Error
{
public:
  using Error::Error;
};

// Scenario / configuration
class ConfigError : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  using Error::Error;
};

class ValidationError : public Error
{
public:
  using Error::Error;
};

}  // namespace polycbf

#endif  // POLYCBF__ERRORS_HPP_
