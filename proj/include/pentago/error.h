#pragma once

#include <stdexcept>
#include <string>

namespace pentago {

enum class Errc {
  invalid_argument,
  occupied_cell,
  wrong_turn,
  terminal_position,
  full_quadrant,
  index_out_of_range,
  missing_input,
  dimension_mismatch,
  shape_mismatch,
  duplicate_contribution,
  incomplete_block,
  out_of_memory,
  deadlock,
  checksum_mismatch,
  unknown_codec,
  block_not_found,
  too_few_stones,
  terminal_root,
  tree_too_large,
  io_error,
  unavailable,
};

const char* errc_name(Errc code);

// Every failure in the library is reported as an Error carrying a code, so
// callers (CLI, server) can map it to exit codes or HTTP statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace pentago
