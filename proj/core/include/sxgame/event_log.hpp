#pragma once

// Append-only game event log. One JSON object per line, one file per UTC day:
//
//   {"seq":3,"t":1700000000123,"room":"R1","actor":"p2","op":"ROLL","fields":["p2","5"]}
//
// Sequence numbers are per room, start at 1 and have no gaps. A record is
// flushed and fsync'd before append() returns.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sxgame {

inline constexpr std::string_view kSystemActor = "SYSTEM";

struct LogRecord {
  std::uint64_t seq = 0;
  std::int64_t time_ms = 0;
  std::string room_id;
  std::string actor;
  std::string opcode;
  std::vector<std::string> fields;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

std::string to_json_line(const LogRecord& record);
LogRecord parse_json_line(std::string_view line);

// "YYYY-MM-DD" for a millisecond UTC timestamp.
std::string utc_day(std::int64_t time_ms);

class LogError : public std::runtime_error {
 public:
  enum class Code { SequenceGap, IoError };

  LogError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

class LogStorage {
 public:
  virtual ~LogStorage() = default;
  // Must be durable when it returns; throws LogError{IoError} otherwise.
  virtual void append_line(std::string_view day, std::string_view line) = 0;
  // Every stored line, oldest file first.
  virtual std::vector<std::string> read_lines() const = 0;
};

class FileLogStorage : public LogStorage {
 public:
  explicit FileLogStorage(std::filesystem::path dir);
  ~FileLogStorage() override;

  FileLogStorage(const FileLogStorage&) = delete;
  FileLogStorage& operator=(const FileLogStorage&) = delete;

  void append_line(std::string_view day, std::string_view line) override;
  std::vector<std::string> read_lines() const override;

  std::filesystem::path file_for(std::string_view day) const;

 private:
  void close_current() noexcept;

  std::filesystem::path dir_;
  std::string open_day_;
  int fd_ = -1;
};

class MemoryLogStorage : public LogStorage {
 public:
  void append_line(std::string_view day, std::string_view line) override;
  std::vector<std::string> read_lines() const override;

  // Concatenated contents, one line per record.
  std::string contents() const;

 private:
  std::vector<std::string> lines_;
};

class EventLog {
 public:
  explicit EventLog(std::unique_ptr<LogStorage> storage);

  // Requires record.seq == last seq of the room + 1.
  void append(const LogRecord& record);
  // Fills in the next sequence number and appends; returns the stored record.
  LogRecord append_next(std::int64_t time_ms, const std::string& room_id, std::string actor, std::string opcode,
                        std::vector<std::string> fields);

  std::vector<LogRecord> query(std::string_view room_id) const;
  std::vector<std::string> rooms() const;
  std::uint64_t last_seq(std::string_view room_id) const;
  // Records skipped at load because they did not parse (torn final writes).
  std::size_t skipped_on_load() const noexcept { return skipped_; }

  // Tabular export: header row then one CSV row per record.
  void export_csv(std::string_view room_id, std::ostream& out) const;

  LogStorage& storage() noexcept { return *storage_; }

 private:
  std::unique_ptr<LogStorage> storage_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<LogRecord>, std::less<>> by_room_;
  std::size_t skipped_ = 0;
};

}  // namespace sxgame
