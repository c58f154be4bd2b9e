#pragma once

#include <stdexcept>
#include <string>

namespace rache {

// Root of every error the library throws. The CLI maps all of these to
// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the operation (plaintext >= n,
// radix < 2, odd key size, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A value lies above the maximum a radix cache was built for.
class OutOfCacheRangeError : public DomainError {
 public:
  OutOfCacheRangeError(const std::string& what, std::size_t index)
      : DomainError(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class MalformedCiphertextError : public Error {
 public:
  using Error::Error;
};

class KeyGenError : public Error {
 public:
  using Error::Error;
};

class EntropyError : public Error {
 public:
  using Error::Error;
};

// Unparseable input: bad decimal or hex, missing header, unknown key field.
class FormatError : public Error {
 public:
  using Error::Error;
};

class KeyMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

// A benchmarked pipeline produced ciphertexts that do not decrypt to the
// input plaintexts.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rache
