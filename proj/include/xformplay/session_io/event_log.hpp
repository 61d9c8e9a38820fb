#pragma once

// Append-only session log (.xlog.jsonl). Line 0 is the header; each later
// line is one MoveEvent plus the session status right after it. Error line
// numbers count event lines from 1, the header being line 0.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xformplay/puzzle_engine.hpp"

namespace xformplay::io {

inline constexpr const char* kLogExtension = ".xlog.jsonl";

struct LogHeader {
  int format_version = 1;
  std::string puzzle_id;
  std::uint64_t seed = 0;
  std::string engine_version = kEngineVersion;
  friend bool operator==(const LogHeader&, const LogHeader&) = default;
};

struct LoggedEvent {
  MoveEvent event;
  Status status_after = Status::Playing;
  friend bool operator==(const LoggedEvent&, const LoggedEvent&) = default;
};

struct EventLogFile {
  LogHeader header;
  std::vector<LoggedEvent> entries;
  std::vector<std::string> warnings;

  std::vector<MoveEvent> events() const;
  // Status after the last event; Playing for an empty log.
  Status terminal_status() const;
};

LogHeader header_for(const PuzzleSpec& spec);

std::string header_line(const LogHeader& header);
std::string event_line(const LoggedEvent& entry);

class EventLogWriter {
 public:
  // Truncates `path` and writes the header line.
  static EventLogWriter create(const std::filesystem::path& path, const LogHeader& header);

  EventLogWriter(EventLogWriter&& other) noexcept;
  EventLogWriter& operator=(EventLogWriter&& other) noexcept;
  EventLogWriter(const EventLogWriter&) = delete;
  EventLogWriter& operator=(const EventLogWriter&) = delete;
  ~EventLogWriter();

  // One write(2) per line on an O_APPEND descriptor, so a crash can only
  // leave a partial final line.
  void append(const LoggedEvent& entry);

  const std::filesystem::path& path() const { return path_; }

 private:
  EventLogWriter(int fd, std::filesystem::path path) : fd_(fd), path_(std::move(path)) {}
  void write_line(const std::string& line);

  int fd_ = -1;
  std::filesystem::path path_;
};

void append_event(EventLogWriter& log, const MoveEvent& event, Status status_after);

// Validates contiguity (CorruptLog with line number on a gap or duplicate).
// An unterminated, unparsable final line is dropped with a warning.
EventLogFile parse_log(std::string_view text);
EventLogFile read_log(const std::filesystem::path& path);

}  // namespace xformplay::io
