#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "sxgame/event_log.hpp"

using namespace sxgame;

namespace {

constexpr std::int64_t kT0 = 1'700'000'000'000;

LogRecord record(std::uint64_t seq, std::string room = "R1") {
  return LogRecord{seq, kT0 + static_cast<std::int64_t>(seq), std::move(room), "p1", "ROLL", {"p1", std::to_string(seq)}};
}

LogError::Code error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const LogError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no LogError";
  return LogError::Code::IoError;
}

}  // namespace

TEST(EventLog, JsonLineRoundTrip) {
  LogRecord r{7, kT0, "R3", "SYSTEM", "ROUND_RESULT", {"a|b", "line\nbreak", "quote\"", "水"}};
  const auto line = to_json_line(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(parse_json_line(line), r);
  EXPECT_EQ(to_json_line(record(1)),
            R"({"seq":1,"t":1700000000001,"room":"R1","actor":"p1","op":"ROLL","fields":["p1","1"]})");
}

TEST(EventLog, UtcDay) {
  EXPECT_EQ(utc_day(0), "1970-01-01");
  EXPECT_EQ(utc_day(kT0), "2023-11-14");
  EXPECT_EQ(utc_day(86'400'000 - 1), "1970-01-01");
  EXPECT_EQ(utc_day(86'400'000), "1970-01-02");
}

TEST(EventLog, SequenceRules) {
  EventLog log(std::make_unique<MemoryLogStorage>());
  log.append(record(1));
  log.append(record(2));
  log.append(record(3));
  EXPECT_EQ(error_of([&] { log.append(record(5)); }), LogError::Code::SequenceGap);
  EXPECT_EQ(error_of([&] { log.append(record(3)); }), LogError::Code::SequenceGap);
  EXPECT_EQ(error_of([&] { log.append(record(2, "R2")); }), LogError::Code::SequenceGap);
  log.append(record(1, "R2"));
  EXPECT_EQ(log.last_seq("R1"), 3u);
  EXPECT_EQ(log.last_seq("R2"), 1u);
  EXPECT_EQ(log.last_seq("R9"), 0u);
}

TEST(EventLog, Query) {
  EventLog log(std::make_unique<MemoryLogStorage>());
  EXPECT_TRUE(log.query("nope").empty());
  for (std::uint64_t i = 1; i <= 50; ++i) {
    log.append_next(kT0 + static_cast<std::int64_t>(i), i % 2 ? "R1" : "R2", "p", "ROLL", {});
  }
  const auto r1 = log.query("R1");
  ASSERT_EQ(r1.size(), 25u);
  for (std::size_t i = 0; i < r1.size(); ++i) EXPECT_EQ(r1[i].seq, i + 1);
  EXPECT_EQ(log.rooms(), (std::vector<std::string>{"R1", "R2"}));
}

TEST(EventLog, FileRestartDurability) {
  testing_support::TempDir tmp;
  std::vector<LogRecord> before;
  {
    EventLog log(std::make_unique<FileLogStorage>(tmp.path()));
    for (std::uint64_t i = 1; i <= 20; ++i) log.append(record(i));
    log.append_next(kT0 + 86'400'000, "R2", "SYSTEM", "START", {"SHOWDOWN"});
    before = log.query("R1");
  }
  EventLog reopened(std::make_unique<FileLogStorage>(tmp.path()));
  EXPECT_EQ(reopened.query("R1"), before);
  EXPECT_EQ(reopened.query("R2").size(), 1u);
  EXPECT_EQ(reopened.skipped_on_load(), 0u);
  reopened.append(record(21));
  EXPECT_EQ(error_of([&] { reopened.append(record(21)); }), LogError::Code::SequenceGap);
  // One file per UTC day.
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(tmp.path())) files += e.is_regular_file();
  EXPECT_EQ(files, 2u);
}

TEST(EventLog, TornFinalLineIsSkipped) {
  testing_support::TempDir tmp;
  std::filesystem::path file;
  {
    FileLogStorage storage(tmp.path());
    EventLog log(std::make_unique<FileLogStorage>(tmp.path()));
    log.append(record(1));
    log.append(record(2));
    file = storage.file_for(utc_day(kT0));
  }
  {
    std::ofstream out(file, std::ios::app);
    out << R"({"seq":3,"t":17000)";
  }
  EventLog reopened(std::make_unique<FileLogStorage>(tmp.path()));
  EXPECT_EQ(reopened.query("R1").size(), 2u);
  EXPECT_EQ(reopened.skipped_on_load(), 1u);
  reopened.append(record(3));
  EXPECT_EQ(reopened.query("R1").size(), 3u);
}

TEST(EventLog, IoErrorSurfaces) {
  auto fail = std::make_shared<bool>(false);
  EventLog log(std::make_unique<testing_support::FlakyStorage>(fail));
  log.append(record(1));
  *fail = true;
  EXPECT_EQ(error_of([&] { log.append(record(2)); }), LogError::Code::IoError);
  // The failed record was not committed.
  EXPECT_EQ(log.last_seq("R1"), 1u);
  *fail = false;
  log.append(record(2));
  EXPECT_EQ(log.query("R1").size(), 2u);
}

TEST(EventLog, UnwritableDirectoryIsIoError) {
  EXPECT_EQ(error_of([] {
              EventLog log(std::make_unique<FileLogStorage>("/proc/sxgame-no-such-dir"));
              log.append(record(1));
            }),
            LogError::Code::IoError);
}

TEST(EventLog, CsvExport) {
  EventLog log(std::make_unique<MemoryLogStorage>());
  log.append(LogRecord{1, kT0, "R1", "p1", "SE_SUBMIT", {"p1", "a, \"quoted\" text"}});
  std::ostringstream out;
  log.export_csv("R1", out);
  const auto csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "seq,time_ms,utc_day,room,actor,opcode,field1,field2");
  EXPECT_NE(csv.find("\"a, \"\"quoted\"\" text\""), std::string::npos) << csv;
}
