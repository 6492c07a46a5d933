#include "pentago/error.h"

namespace pentago {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::occupied_cell: return "OccupiedCell";
    case Errc::wrong_turn: return "WrongTurn";
    case Errc::terminal_position: return "TerminalPosition";
    case Errc::full_quadrant: return "FullQuadrant";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::missing_input: return "MissingInput";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::duplicate_contribution: return "DuplicateContribution";
    case Errc::incomplete_block: return "IncompleteBlock";
    case Errc::out_of_memory: return "OutOfMemory";
    case Errc::deadlock: return "Deadlock";
    case Errc::checksum_mismatch: return "ChecksumMismatch";
    case Errc::unknown_codec: return "UnknownCodec";
    case Errc::block_not_found: return "BlockNotFound";
    case Errc::too_few_stones: return "TooFewStones";
    case Errc::terminal_root: return "TerminalRoot";
    case Errc::tree_too_large: return "TreeTooLarge";
    case Errc::io_error: return "IoError";
    case Errc::unavailable: return "Unavailable";
  }
  return "Unknown";
}

}  // namespace pentago
