/*
 * Copyright 2026 The LAPT Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LAPT_ERRORS_H_
#define LAPT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace lapt {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes: IoError -> 2, everything else -> 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate or non-rigid calibration (non-orthonormal rotation, bad
// bottom row, invalid intrinsics).
class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's contract (shape mismatch, bad factor,
// non-positive depth, self-intersecting polygon, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed file content: bad magic, truncated payload, header mismatch.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File system failure: missing file, unwritable path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lapt

#endif  // LAPT_ERRORS_H_
