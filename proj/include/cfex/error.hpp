#pragma once

#include <stdexcept>
#include <string>

namespace cfex {

/// Base of every error the engine raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// diff-core
class EmptyInput : public Error {
 public:
  EmptyInput() : Error("diff text has no lines") {}
  explicit EmptyInput(const std::string& what) : Error(what) {}
};
class UnknownGroup : public Error {
 public:
  explicit UnknownGroup(int group_id)
      : Error("unknown consistency group " + std::to_string(group_id)) {}
};
class InvalidReplacement : public Error {
 public:
  explicit InvalidReplacement(const std::string& text)
      : Error("replacement must be a single non-whitespace token: '" + text + "'") {}
};

// model-adapter
class AdapterUnavailable : public Error {
 public:
  using Error::Error;
};
class MalformedResponse : public Error {
 public:
  using Error::Error;
};

// search
class InvalidCandidate : public Error {
 public:
  using Error::Error;
};
class EmptyExplore : public Error {
 public:
  EmptyExplore() : Error("choose() called on an empty explore set") {}
};

// synthetic-corpus
class InvalidParams : public Error {
 public:
  using Error::Error;
};
class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace cfex
