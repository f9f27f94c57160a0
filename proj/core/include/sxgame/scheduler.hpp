#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <vector>

namespace sxgame {

using TimerId = std::uint64_t;

// Source of time and deferred actions. Everything a room does, including
// timer expiries, runs as a callback on one scheduler, so a room's actions are
// totally ordered.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::int64_t now_ms() const = 0;
  virtual TimerId schedule_after(std::int64_t delay_ms, std::function<void()> fn) = 0;
  virtual void cancel(TimerId id) = 0;
};

// Discrete-event scheduler over simulated milliseconds. Callbacks due at the
// same instant run in scheduling order.
class SimScheduler : public Scheduler {
 public:
  explicit SimScheduler(std::int64_t start_ms = 0) : now_(start_ms) {}

  std::int64_t now_ms() const override { return now_; }
  TimerId schedule_after(std::int64_t delay_ms, std::function<void()> fn) override;
  void cancel(TimerId id) override;

  // Runs the next due callback; false when nothing is pending.
  bool step();
  // Runs every callback due at or before `until_ms`, then sets the clock to
  // `until_ms`. Returns true if the queue drained.
  bool run_until(std::int64_t until_ms);
  std::size_t pending() const noexcept { return callbacks_.size(); }

 private:
  struct Entry {
    std::int64_t at;
    TimerId id;
    bool operator>(const Entry& o) const noexcept { return at != o.at ? at > o.at : id > o.id; }
  };

  std::int64_t now_;
  TimerId next_id_ = 1;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
  std::map<TimerId, std::function<void()>> callbacks_;
};

}  // namespace sxgame
