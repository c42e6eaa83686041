#pragma once

#include <stdexcept>
#include <string>

namespace genex {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownEventTypeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownRoleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RoleMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SpanOutOfRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IllegalTokenError : public Error {
 public:
  using Error::Error;
};

class EmptyCandidateError : public Error {
 public:
  using Error::Error;
};

// paren_codec parse failures
class UnbalancedParensError : public ParseError {
 public:
  using ParseError::ParseError;
};

class MisplacedContentError : public ParseError {
 public:
  using ParseError::ParseError;
};

class EmptyItemError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class DecodeDeadEndError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

class MaxStepsExceededError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

class TokenizerError : public Error {
 public:
  using Error::Error;
};

class BackendError : public Error {
 public:
  using Error::Error;
};

class BackendTimeoutError : public BackendError {
 public:
  using BackendError::BackendError;
};

class BackendConnectionError : public BackendError {
 public:
  using BackendError::BackendError;
};

class BackendStatusError : public BackendError {
 public:
  BackendStatusError(int status, const std::string& what) : BackendError(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class MalformedResponseError : public BackendError {
 public:
  using BackendError::BackendError;
};

class LengthMismatchError : public MalformedResponseError {
 public:
  using MalformedResponseError::MalformedResponseError;
};

}  // namespace genex
