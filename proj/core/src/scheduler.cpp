#include "sxgame/scheduler.hpp"

#include <stdexcept>

namespace sxgame {

TimerId SimScheduler::schedule_after(std::int64_t delay_ms, std::function<void()> fn) {
  if (delay_ms < 0) throw std::invalid_argument("negative delay");
  const TimerId id = next_id_++;
  queue_.push(Entry{now_ + delay_ms, id});
  callbacks_.emplace(id, std::move(fn));
  return id;
}

void SimScheduler::cancel(TimerId id) { callbacks_.erase(id); }

bool SimScheduler::step() {
  while (!queue_.empty()) {
    const Entry e = queue_.top();
    queue_.pop();
    const auto it = callbacks_.find(e.id);
    if (it == callbacks_.end()) continue;  // cancelled
    auto fn = std::move(it->second);
    callbacks_.erase(it);
    now_ = e.at;
    fn();
    return true;
  }
  return false;
}

bool SimScheduler::run_until(std::int64_t until_ms) {
  while (true) {
    while (!queue_.empty() && !callbacks_.contains(queue_.top().id)) queue_.pop();
    if (queue_.empty() || queue_.top().at > until_ms) {
      if (until_ms > now_) now_ = until_ms;
      return queue_.empty();
    }
    step();
  }
}

}  // namespace sxgame
