/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The v2x-sps Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace v2xsps {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index outside the resource grid.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Matrix or vector dimensions do not agree with the grid/cluster.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. Carries the 1-based line and column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : what + " (line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// More vehicles than subframes: no orthogonal assignment exists.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds a configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise invalid numeric input.
class InputError : public Error {
 public:
  using Error::Error;
};

// A proposed assignment breaks uniqueness or subframe orthogonality.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

// Experiment configuration rejected; message lists the offending keys.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace v2xsps
