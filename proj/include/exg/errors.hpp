/*
Copyright 2026 The exg authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef EXG_ERRORS_HPP
#define EXG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace exg {

/// Base class of every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- recording ---
class NestedTrace : public Error {
 public:
  using Error::Error;
};
class NoOpenTrace : public Error {
 public:
  using Error::Error;
};
class EmptyTaskStack : public Error {
 public:
  using Error::Error;
};
class UnclosedRegion : public Error {
 public:
  using Error::Error;
};

// --- file formats ---
class MalformedTrace : public Error {
 public:
  using Error::Error;
};
class MalformedGraph : public Error {
 public:
  using Error::Error;
};
class MalformedReport : public Error {
 public:
  using Error::Error;
};

// --- kernels ---
class InvalidParam : public Error {
 public:
  using Error::Error;
};
class InvalidLength : public InvalidParam {
 public:
  using InvalidParam::InvalidParam;
};

// --- graph building ---
class SelfDependency : public Error {
 public:
  using Error::Error;
};

// --- analysis ---
class NotADag : public Error {
 public:
  using Error::Error;
};
class EmptyGraph : public Error {
 public:
  using Error::Error;
};
class EmptySet : public Error {
 public:
  using Error::Error;
};
class SamePair : public Error {
 public:
  using Error::Error;
};
class InvalidPartition : public Error {
 public:
  using Error::Error;
};
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// A broken internal consistency guarantee, as opposed to bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace exg

#endif  // EXG_ERRORS_HPP
