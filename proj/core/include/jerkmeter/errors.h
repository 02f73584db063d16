// Copyright 2026 The Jerkmeter Authors
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

#ifndef JERKMETER_ERRORS_H_
#define JERKMETER_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jerkmeter {

// Base of every error the library throws. The CLI maps ValidationError to
// exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input detected before any real work starts (flags, configs).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  // `unit` names what position counts: "byte" for video headers, "line" for
  // tables.
  ParseError(std::size_t position, const std::string& reason,
             const std::string& unit = "byte")
      : Error("parse error at " + unit + " " + std::to_string(position) +
              ": " + reason),
        position_(position),
        reason_(reason) {}

  std::size_t position() const { return position_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

class TruncatedFrame : public Error {
 public:
  explicit TruncatedFrame(std::size_t frame_index)
      : Error("truncated payload in frame " + std::to_string(frame_index)),
        frame_index_(frame_index) {}

  std::size_t frame_index() const { return frame_index_; }

 private:
  std::size_t frame_index_;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

class TrailingBytes : public Error {
 public:
  explicit TrailingBytes(std::size_t remainder)
      : Error(std::to_string(remainder) +
              " trailing bytes do not form a whole frame"),
        remainder_(remainder) {}

  std::size_t remainder() const { return remainder_; }

 private:
  std::size_t remainder_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class TooFewFrames : public Error {
 public:
  explicit TooFewFrames(std::size_t frame_count)
      : Error("need at least 2 frames, got " + std::to_string(frame_count)),
        frame_count_(frame_count) {}

  std::size_t frame_count() const { return frame_count_; }

 private:
  std::size_t frame_count_;
};

class ModelFormatError : public Error {
 public:
  ModelFormatError(const std::string& field, const std::string& reason)
      : Error("model field '" + field + "': " + reason), field_(field) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class InvalidModel : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class PlanError : public Error {
 public:
  using Error::Error;
};

}  // namespace jerkmeter

#endif  // JERKMETER_ERRORS_H_
