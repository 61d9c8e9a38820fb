#include "xformplay/session_io/puzzle_file.hpp"

#include <fstream>
#include <sstream>

#include "xformplay/error.hpp"
#include "xformplay/session_io/codec.hpp"

namespace xformplay::io {

std::string puzzle_to_text(const PuzzleFile& file) {
  const Json doc{{"format_version", file.format_version},
                 {"engine_version", kEngineVersion},
                 {"spec", to_json(file.spec)},
                 {"model", to_json(file.model)}};
  return doc.dump(2) + "\n";
}

PuzzleFile puzzle_from_text(std::string_view text) {
  const Json doc = parse_json(text, "puzzle file");
  const Fields f(doc, "puzzle");
  const std::int64_t version = f.integer("format_version");
  if (version != kFormatVersion)
    throw Error(ErrorCode::VersionMismatch, "puzzle format_version " + std::to_string(version) +
                                                " is not supported (expected " + std::to_string(kFormatVersion) + ")");
  f.only({"format_version", "engine_version", "spec", "model"});

  PuzzleFile file;
  file.format_version = static_cast<int>(version);
  file.spec = spec_from_json(f.at("spec"));
  file.model = model_from_json(f.at("model"));

  try {
    validate_spec(file.spec);
    validate_model(file.model);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvariantViolation, e.what());
  }
  if (file.model.id != file.spec.model_ref)
    throw Error(ErrorCode::InvariantViolation,
                "spec.model_ref '" + file.spec.model_ref + "' does not name the bundled model '" + file.model.id + "'");
  return file;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

void save_puzzle(const std::filesystem::path& path, const PuzzleFile& file) {
  write_text_file(path, puzzle_to_text(file));
}

PuzzleFile load_puzzle(const std::filesystem::path& path) { return puzzle_from_text(read_text_file(path)); }

}  // namespace xformplay::io
