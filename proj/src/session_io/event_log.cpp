#include "xformplay/session_io/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

#include "xformplay/error.hpp"
#include "xformplay/session_io/codec.hpp"
#include "xformplay/session_io/puzzle_file.hpp"

namespace xformplay::io {

std::vector<MoveEvent> EventLogFile::events() const {
  std::vector<MoveEvent> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.event);
  return out;
}

Status EventLogFile::terminal_status() const {
  return entries.empty() ? Status::Playing : entries.back().status_after;
}

LogHeader header_for(const PuzzleSpec& spec) {
  LogHeader h;
  h.puzzle_id = spec.id;
  h.seed = spec.seed;
  return h;
}

std::string header_line(const LogHeader& header) {
  const Json j{{"type", "xformplay-log"},
               {"format_version", header.format_version},
               {"puzzle_id", header.puzzle_id},
               {"seed", header.seed},
               {"engine_version", header.engine_version}};
  return j.dump();
}

std::string event_line(const LoggedEvent& entry) {
  Json j = to_json(entry.event);
  j["status"] = status_name(entry.status_after);
  return j.dump();
}

EventLogWriter EventLogWriter::create(const std::filesystem::path& path, const LogHeader& header) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::Io, "cannot open log " + path.string() + ": " + std::strerror(errno));
  EventLogWriter w(fd, path);
  w.write_line(header_line(header));
  return w;
}

EventLogWriter::EventLogWriter(EventLogWriter&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), path_(std::move(other.path_)) {}

EventLogWriter& EventLogWriter::operator=(EventLogWriter&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    path_ = std::move(other.path_);
  }
  return *this;
}

EventLogWriter::~EventLogWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void EventLogWriter::write_line(const std::string& line) {
  const std::string buf = line + "\n";
  std::size_t done = 0;
  while (done < buf.size()) {
    const ssize_t n = ::write(fd_, buf.data() + done, buf.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::Io, "log write failed: " + std::string(std::strerror(errno)));
    }
    done += static_cast<std::size_t>(n);
  }
}

void EventLogWriter::append(const LoggedEvent& entry) { write_line(event_line(entry)); }

void append_event(EventLogWriter& log, const MoveEvent& event, Status status_after) {
  log.append({event, status_after});
}

namespace {

LogHeader parse_header(std::string_view line) {
  Json j;
  try {
    j = parse_json(line, "log header");
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  const Fields f(j, "log header");
  if (f.string("type") != "xformplay-log") throw Error(ErrorCode::MalformedDocument, "not an xformplay log");
  const std::int64_t version = f.integer("format_version");
  if (version != kFormatVersion)
    throw Error(ErrorCode::VersionMismatch, "log format_version " + std::to_string(version) + " is not supported");
  f.only({"type", "format_version", "puzzle_id", "seed", "engine_version"});
  LogHeader h;
  h.format_version = static_cast<int>(version);
  h.puzzle_id = f.string("puzzle_id");
  h.seed = f.unsigned_integer("seed");
  h.engine_version = f.string("engine_version");
  return h;
}

LoggedEvent parse_entry(std::string_view line) {
  const Json j = parse_json(line, "log line");
  const Fields f(j, "log line");
  f.only({"seq", "actor", "t_ms", "action", "status"});
  return {event_from_json(j), parse_status(f.string("status"))};
}

}  // namespace

EventLogFile parse_log(std::string_view text) {
  std::vector<std::string_view> lines;
  bool last_terminated = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      last_terminated = false;
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::MalformedDocument, "log is empty (no header)");

  EventLogFile log;
  log.header = parse_header(lines.front());

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line_no = static_cast<std::int64_t>(i);
    const bool final_partial = i + 1 == lines.size() && !last_terminated;
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;
      throw Error(ErrorCode::CorruptLog, "empty record at line " + std::to_string(line_no)).with_line(line_no);
    }
    LoggedEvent entry;
    try {
      entry = parse_entry(lines[i]);
    } catch (const Error& e) {
      if (final_partial) {
        log.warnings.push_back("dropped partial final line " + std::to_string(line_no));
        break;
      }
      Error err(ErrorCode::CorruptLog, "unreadable record at line " + std::to_string(line_no) + ": " + e.what());
      throw err.with_line(line_no);
    }
    const std::int64_t expected = static_cast<std::int64_t>(log.entries.size()) + 1;
    if (entry.event.sequence_no != expected) {
      const char* kind = entry.event.sequence_no < expected ? "duplicate" : "gap";
      Error err(ErrorCode::CorruptLog, std::string("sequence ") + kind + " at line " + std::to_string(line_no) +
                                           ": expected " + std::to_string(expected) + ", found " +
                                           std::to_string(entry.event.sequence_no));
      throw err.with_line(line_no).with_sequence_no(entry.event.sequence_no);
    }
    log.entries.push_back(std::move(entry));
  }
  return log;
}

EventLogFile read_log(const std::filesystem::path& path) { return parse_log(read_text_file(path)); }

}  // namespace xformplay::io
