#include "sxgame/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace sxgame {

namespace {

[[noreturn]] void io_error(const std::string& what) {
  throw LogError(LogError::Code::IoError, what + ": " + std::strerror(errno));
}

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string to_json_line(const LogRecord& r) {
  nlohmann::ordered_json j;
  j["seq"] = r.seq;
  j["t"] = r.time_ms;
  j["room"] = r.room_id;
  j["actor"] = r.actor;
  j["op"] = r.opcode;
  j["fields"] = r.fields;
  // Replacement keeps arbitrary bytes from aborting the write path.
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

LogRecord parse_json_line(std::string_view line) {
  const auto j = nlohmann::json::parse(line.begin(), line.end());
  LogRecord r;
  r.seq = j.at("seq").get<std::uint64_t>();
  r.time_ms = j.at("t").get<std::int64_t>();
  r.room_id = j.at("room").get<std::string>();
  r.actor = j.at("actor").get<std::string>();
  r.opcode = j.at("op").get<std::string>();
  r.fields = j.at("fields").get<std::vector<std::string>>();
  return r;
}

std::string utc_day(std::int64_t time_ms) {
  using namespace std::chrono;
  const auto tp = sys_time<milliseconds>(milliseconds(time_ms));
  const year_month_day ymd{floor<days>(tp)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

// ---------------------------------------------------------------------------

FileLogStorage::FileLogStorage(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw LogError(LogError::Code::IoError, "cannot create log directory " + dir_.string() + ": " + ec.message());
}

FileLogStorage::~FileLogStorage() { close_current(); }

void FileLogStorage::close_current() noexcept {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  open_day_.clear();
}

std::filesystem::path FileLogStorage::file_for(std::string_view day) const {
  return dir_ / ("events-" + std::string(day) + ".jsonl");
}

void FileLogStorage::append_line(std::string_view day, std::string_view line) {
  if (fd_ < 0 || open_day_ != day) {
    close_current();
    const auto path = file_for(day);
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) io_error("open " + path.string());
    open_day_ = day;
  }
  std::string buf(line);
  buf += '\n';
  const off_t before = ::lseek(fd_, 0, SEEK_END);
  std::size_t written = 0;
  while (written < buf.size()) {
    const auto n = ::write(fd_, buf.data() + written, buf.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int saved = errno;
      // Drop the torn tail so later records start on a clean line.
      if (before >= 0 && ::ftruncate(fd_, before) != 0) {
        // Leave the torn tail; the loader skips unparsable lines.
      }
      errno = saved;
      io_error("write " + file_for(day).string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0 && errno != EINVAL) io_error("fsync " + file_for(day).string());
}

std::vector<std::string> FileLogStorage::read_lines() const {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("events-") && name.ends_with(".jsonl")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> lines;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) lines.push_back(std::move(line));
    }
  }
  return lines;
}

void MemoryLogStorage::append_line(std::string_view, std::string_view line) {
  lines_.emplace_back(line);
}

std::vector<std::string> MemoryLogStorage::read_lines() const { return lines_; }

std::string MemoryLogStorage::contents() const {
  std::string out;
  for (const auto& l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

EventLog::EventLog(std::unique_ptr<LogStorage> storage) : storage_(std::move(storage)) {
  for (const auto& line : storage_->read_lines()) {
    LogRecord r;
    try {
      r = parse_json_line(line);
    } catch (const nlohmann::json::exception&) {
      ++skipped_;
      continue;
    }
    auto& records = by_room_[r.room_id];
    if (!records.empty() && r.seq != records.back().seq + 1) {
      ++skipped_;
      continue;
    }
    records.push_back(std::move(r));
  }
}

void EventLog::append(const LogRecord& record) {
  std::lock_guard lock(mu_);
  const auto it = by_room_.find(record.room_id);
  const std::uint64_t last = it == by_room_.end() || it->second.empty() ? 0 : it->second.back().seq;
  if (record.seq != last + 1) {
    throw LogError(LogError::Code::SequenceGap, "room " + record.room_id + ": expected seq " + std::to_string(last + 1) +
                                                    ", got " + std::to_string(record.seq));
  }
  storage_->append_line(utc_day(record.time_ms), to_json_line(record));
  by_room_[record.room_id].push_back(record);
}

LogRecord EventLog::append_next(std::int64_t time_ms, const std::string& room_id, std::string actor, std::string opcode,
                                std::vector<std::string> fields) {
  LogRecord r{last_seq(room_id) + 1, time_ms, room_id, std::move(actor), std::move(opcode), std::move(fields)};
  append(r);
  return r;
}

std::vector<LogRecord> EventLog::query(std::string_view room_id) const {
  std::lock_guard lock(mu_);
  const auto it = by_room_.find(room_id);
  return it == by_room_.end() ? std::vector<LogRecord>{} : it->second;
}

std::vector<std::string> EventLog::rooms() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [room, _] : by_room_) out.push_back(room);
  return out;
}

std::uint64_t EventLog::last_seq(std::string_view room_id) const {
  std::lock_guard lock(mu_);
  const auto it = by_room_.find(room_id);
  return it == by_room_.end() || it->second.empty() ? 0 : it->second.back().seq;
}

void EventLog::export_csv(std::string_view room_id, std::ostream& out) const {
  const auto records = query(room_id);
  std::size_t width = 0;
  for (const auto& r : records) width = std::max(width, r.fields.size());
  out << "seq,time_ms,utc_day,room,actor,opcode";
  for (std::size_t i = 0; i < width; ++i) out << ",field" << (i + 1);
  out << '\n';
  for (const auto& r : records) {
    out << r.seq << ',' << r.time_ms << ',' << utc_day(r.time_ms) << ',' << csv_cell(r.room_id) << ','
        << csv_cell(r.actor) << ',' << csv_cell(r.opcode);
    for (std::size_t i = 0; i < width; ++i) out << ',' << (i < r.fields.size() ? csv_cell(r.fields[i]) : "");
    out << '\n';
  }
}

}  // namespace sxgame
