// Copyright 2026 The MSR Audit Authors.
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

#ifndef MSR_ERROR_HPP_
#define MSR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace msr {

// Base class for every error raised by the library. The category decides the
// process exit code used by the command-line tool.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Generation backend failure (exit code 3).
class BackendError : public Error {
 public:
  BackendError(const std::string& what, bool transient, int status = 0)
      : Error(what), transient_(transient), status_(status) {}

  // Timeouts, rate limits and server-side statuses; worth retrying.
  bool transient() const noexcept { return transient_; }
  // Protocol status when one was received, 0 otherwise.
  int status() const noexcept { return status_; }

 private:
  bool transient_;
  int status_;
};

}  // namespace msr

#endif  // MSR_ERROR_HPP_
