#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace svi {

// Broad failure categories; the CLI maps these onto exit codes
// (usage errors are handled by the argument parser itself).
enum class ErrorKind {
  Data,     // malformed input files, label/id violations, bad configs
  Backend,  // transport or protocol failures when querying a model
  Io,       // filesystem problems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  int exit_code() const {
    switch (kind_) {
      case ErrorKind::Backend:
        return 3;
      case ErrorKind::Data:
      case ErrorKind::Io:
        return 2;
    }
    return 2;
  }

 private:
  ErrorKind kind_;
};

struct MalformedRecordError : Error {
  MalformedRecordError(std::size_t line, const std::string& detail)
      : Error(ErrorKind::Data, "malformed record at line " +
                                   std::to_string(line) + ": " + detail),
        line(line) {}
  std::size_t line;
};

struct DuplicateIdError : Error {
  explicit DuplicateIdError(const std::string& id)
      : Error(ErrorKind::Data, "duplicate sample id \"" + id + "\""), id(id) {}
  std::string id;
};

struct UnknownLabelError : Error {
  explicit UnknownLabelError(const std::string& value)
      : Error(ErrorKind::Data, "unknown label \"" + value + "\""),
        value(value) {}
  std::string value;
};

struct InsufficientLabelError : Error {
  InsufficientLabelError(const std::string& label, std::size_t have,
                         std::size_t need)
      : Error(ErrorKind::Data, "label " + label + " has " +
                                   std::to_string(have) + " samples, need " +
                                   std::to_string(need)),
        label(label),
        have(have),
        need(need) {}
  std::string label;
  std::size_t have;
  std::size_t need;
};

struct SoftTokenCollisionError : Error {
  explicit SoftTokenCollisionError(const std::string& where)
      : Error(ErrorKind::Data, "soft token collides with text in " + where) {}
};

struct MissingDescriptionError : Error {
  explicit MissingDescriptionError(std::uint32_t cwe_id)
      : Error(ErrorKind::Data,
              "no description for CWE-" + std::to_string(cwe_id)),
        cwe_id(cwe_id) {}
  std::uint32_t cwe_id;
};

struct EmptyReferenceError : Error {
  EmptyReferenceError() : Error(ErrorKind::Data, "BLEU reference is empty") {}
};

struct NoCandidatesError : Error {
  NoCandidatesError() : Error(ErrorKind::Data, "candidate set is empty") {}
};

struct DanglingEdgeError : Error {
  DanglingEdgeError(std::uint32_t child, std::uint32_t parent)
      : Error(ErrorKind::Data, "edge (" + std::to_string(child) + " -> " +
                                   std::to_string(parent) +
                                   ") references an undeclared node") {}
};

struct CycleDetectedError : Error {
  CycleDetectedError() : Error(ErrorKind::Data, "taxonomy contains a cycle") {}
};

struct DuplicateNodeError : Error {
  explicit DuplicateNodeError(std::uint32_t id)
      : Error(ErrorKind::Data,
              "duplicate taxonomy node CWE-" + std::to_string(id)) {}
};

struct UnknownIdError : Error {
  explicit UnknownIdError(std::uint32_t id)
      : Error(ErrorKind::Data,
              "CWE-" + std::to_string(id) + " is not in the taxonomy"),
        id(id) {}
  std::uint32_t id;
};

struct TimeoutError : Error {
  explicit TimeoutError(const std::string& detail)
      : Error(ErrorKind::Backend, "request timed out: " + detail) {}
};

struct RateLimitedError : Error {
  RateLimitedError()
      : Error(ErrorKind::Backend, "rate limited after all retries") {}
};

struct ServerErrorError : Error {
  explicit ServerErrorError(int status, const std::string& body = "")
      : Error(ErrorKind::Backend,
              "server returned status " + std::to_string(status) +
                  (body.empty() ? "" : ": " + body)),
        status(status) {}
  int status;
};

struct MissingReplayEntryError : Error {
  explicit MissingReplayEntryError(const std::string& sample_id)
      : Error(ErrorKind::Backend,
              "no replay entry for sample \"" + sample_id + "\""),
        sample_id(sample_id) {}
  std::string sample_id;
};

struct UnknownSampleError : Error {
  explicit UnknownSampleError(const std::string& id)
      : Error(ErrorKind::Data,
              "prediction for id \"" + id + "\" has no ground truth"),
        id(id) {}
  std::string id;
};

struct MissingPredictionError : Error {
  explicit MissingPredictionError(const std::string& id)
      : Error(ErrorKind::Data, "no prediction for sample \"" + id + "\""),
        id(id) {}
  std::string id;
};

struct EmptyMatrixError : Error {
  EmptyMatrixError() : Error(ErrorKind::Data, "confusion matrix is empty") {}
};

struct IoError : Error {
  explicit IoError(const std::string& detail)
      : Error(ErrorKind::Io, detail) {}
};

}  // namespace svi
