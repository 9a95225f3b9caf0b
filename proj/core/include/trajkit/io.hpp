#pragma once

#include <string>

#include "trajkit/types.hpp"

namespace trajkit {

/// Raised for malformed dataset files; message carries the line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an I/O target cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DatasetFormat { tsv };

/// Reads a dataset from a line-based TSV file.
///
/// Each line is `scene_id \t agent_id \t frame \t x \t y`; '#'-prefixed
/// lines and blank lines are ignored. Rows are grouped by (scene, agent)
/// in first-encounter order and sorted by frame; frames within an agent
/// must be strictly increasing and uniformly spaced (the spacing becomes
/// the trajectory dt). Coordinates must be finite.
Dataset parse_dataset(const std::string& path,
                      DatasetFormat format = DatasetFormat::tsv);

/// Writes a dataset in the same TSV layout. Doubles are emitted with
/// shortest round-trip formatting, so write -> parse -> write is
/// byte-identical and at least 9 significant digits survive.
void write_dataset(const Dataset& d, const std::string& path);

/// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace trajkit
