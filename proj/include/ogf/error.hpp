// Copyright 2026 The ogf Authors
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

#ifndef OGF_ERROR_HPP_
#define OGF_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ogf
{

/// Base class for all errors raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A cell index outside [0, N).
class InvalidCell : public Error
{
public:
  InvalidCell(std::size_t cell, std::size_t n_cells)
  : Error("cell index " + std::to_string(cell) + " out of range [0, " + std::to_string(n_cells) +
          ")")
  {
  }
};

/// The requested covariance backend cannot hold the lattice.
class CapacityError : public Error
{
public:
  using Error::Error;
};

/// Non-finite filter state or an undefined metric.
class NumericalError : public Error
{
public:
  using Error::Error;
};

/// Malformed input file or unreadable path. Carries the path and, when known, the line.
class IoError : public Error
{
public:
  IoError(const std::string & path, std::size_t line, const std::string & what)
  : Error(path + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
    path_(path),
    line_(line)
  {
  }

  const std::string & path() const { return path_; }
  std::size_t line() const { return line_; }

private:
  std::string path_;
  std::size_t line_;
};

}  // namespace ogf

#endif  // OGF_ERROR_HPP_
