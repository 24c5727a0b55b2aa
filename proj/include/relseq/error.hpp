#pragma once

#include <stdexcept>
#include <string>

namespace relseq {

/// Base class of every error raised by the library. `code()` is a stable
/// machine-readable identifier used in the CLI's JSON error output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define RELSEQ_DEFINE_ERROR(Name, Code)                               \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(Code, what) {}     \
  };

RELSEQ_DEFINE_ERROR(ParseError, "parse_error")
RELSEQ_DEFINE_ERROR(ValidationError, "validation_error")
RELSEQ_DEFINE_ERROR(IoError, "io_error")
RELSEQ_DEFINE_ERROR(UnknownSequenceError, "unknown_sequence")
RELSEQ_DEFINE_ERROR(IndexOutOfRangeError, "index_out_of_range")
RELSEQ_DEFINE_ERROR(InvalidStateError, "invalid_state")
RELSEQ_DEFINE_ERROR(InsufficientDataError, "insufficient_data")
RELSEQ_DEFINE_ERROR(LengthMismatchError, "length_mismatch")
RELSEQ_DEFINE_ERROR(EmptySequenceError, "empty_sequence")
RELSEQ_DEFINE_ERROR(EmptyTrainingSetError, "empty_training_set")
RELSEQ_DEFINE_ERROR(EmptyInputError, "empty_input")
RELSEQ_DEFINE_ERROR(InvalidParameterError, "invalid_parameter")
RELSEQ_DEFINE_ERROR(ModelFormatError, "model_format")
RELSEQ_DEFINE_ERROR(ConfigError, "config_error")

#undef RELSEQ_DEFINE_ERROR

}  // namespace relseq
