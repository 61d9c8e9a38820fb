#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "xformplay/puzzle_engine.hpp"
#include "xformplay/scene_annot.hpp"

namespace xformplay::io {

inline constexpr const char* kPuzzleExtension = ".xpz.json";

struct PuzzleFile {
  int format_version = 1;
  PuzzleSpec spec;
  BrickModel model;
  friend bool operator==(const PuzzleFile&, const PuzzleFile&) = default;
};

std::string puzzle_to_text(const PuzzleFile& file);

// Errors: Parse, MalformedDocument, VersionMismatch (format_version or an
// unknown field), InvariantViolation (unsolvable spec, bad step, bad model).
PuzzleFile puzzle_from_text(std::string_view text);

// Writes through a temporary file and a rename.
void save_puzzle(const std::filesystem::path& path, const PuzzleFile& file);
PuzzleFile load_puzzle(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace xformplay::io
