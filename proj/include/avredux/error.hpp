/* Copyright 2026 The avredux Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef AVREDUX_ERROR_HPP_
#define AVREDUX_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace avredux {

// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes or documents. The message carries line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A quantity is undefined for the given arguments (degenerate box, empty
// denominator, vertical optical axis, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace avredux

#endif  // AVREDUX_ERROR_HPP_
