#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtg {

// Base class for every failure the pipeline reports. Callers that only care
// about "did a stage fail" catch this; tests match the concrete subclasses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string invariant, std::string sentence_id);
  const std::string& invariant() const noexcept { return invariant_; }
  const std::string& sentence_id() const noexcept { return sentence_id_; }

 private:
  std::string invariant_;
  std::string sentence_id_;
};

class IdenticalTranslations : public Error {
 public:
  using Error::Error;
};

class MisalignedPrefix : public Error {
 public:
  using Error::Error;
};

class UnknownSentence : public Error {
 public:
  using Error::Error;
};

class PositionOutOfRange : public Error {
 public:
  using Error::Error;
};

class BackendFailure : public Error {
 public:
  using Error::Error;
};

class GenderUndetermined : public Error {
 public:
  using Error::Error;
};

class AllZeroScores : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class MissingParse : public Error {
 public:
  using Error::Error;
};

class DisconnectedTree : public Error {
 public:
  using Error::Error;
};

class MissingAttribution : public Error {
 public:
  explicit MissingAttribution(std::string sentence_id, const std::string& detail = {});
  const std::string& sentence_id() const noexcept { return sentence_id_; }

 private:
  std::string sentence_id_;
};

}  // namespace mtg
