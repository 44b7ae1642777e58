#include "satpep/event_loop.hpp"

#include <utility>

namespace satpep {

EventLoop::EventLoop(std::uint64_t dispatch_cap) : dispatch_cap_(dispatch_cap) {}

EventHandle EventLoop::schedule(std::uint64_t delay_us, EventAction action) {
  Entry e{now_us_ + delay_us, next_seq_++, next_id_++, std::move(action)};
  EventHandle h{e.id};
  live_ids_.insert(e.id);
  queue_.push(std::move(e));
  return h;
}

bool EventLoop::cancel(EventHandle handle) {
  if (!handle) return false;
  return live_ids_.erase(handle.id) > 0;
}

bool EventLoop::dispatch_next() {
  while (!queue_.empty()) {
    auto it = live_ids_.find(queue_.top().id);
    if (it == live_ids_.end()) {  // cancelled
      queue_.pop();
      continue;
    }
    Entry e = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    live_ids_.erase(it);
    now_us_ = e.due_us;
    if (++dispatched_ > dispatch_cap_) throw LoopLimitExceeded(dispatch_cap_);
    e.action();
    return true;
  }
  return false;
}

std::uint64_t EventLoop::run_until_idle() {
  if (running_) throw std::logic_error("event loop already running");
  running_ = true;
  stopped_ = false;
  while (!stopped_ && dispatch_next()) {
  }
  running_ = false;
  return now_us_;
}

std::uint64_t EventLoop::run_until(std::uint64_t deadline_us) {
  if (running_) throw std::logic_error("event loop already running");
  running_ = true;
  stopped_ = false;
  while (!stopped_) {
    while (!queue_.empty() && live_ids_.count(queue_.top().id) == 0) {
      queue_.pop();
    }
    if (queue_.empty() || queue_.top().due_us > deadline_us) break;
    dispatch_next();
  }
  if (now_us_ < deadline_us) now_us_ = deadline_us;
  running_ = false;
  return now_us_;
}

}  // namespace satpep
