// Copyright 2026 The langlimit Authors.
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

#ifndef LANGLIMIT_ERRORS_H_
#define LANGLIMIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace langlimit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: a language with no infinite part, overlapping parameter
// sets, an unsupported bijection, a bad config record.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A "min { j >= i | ... }" search ran past its probe window. Under the
// algorithms' hypotheses the search is always finite, so this means a
// hypothesis was violated.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

// An explicit or chained collection was searched up to its index bound
// without an answer. Means "unknown", never "false".
class IndexBoundExceeded : public Error {
 public:
  using Error::Error;
};

// The collection has finite-closure sets of every size.
class UnboundedClosureDimension : public Error {
 public:
  using Error::Error;
};

// A query-budgeted generator asked more queries than declared.
class BudgetViolation : public Error {
 public:
  using Error::Error;
};

// Generator kind, source kind and mode do not fit together.
class ModeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace langlimit

#endif  // LANGLIMIT_ERRORS_H_
