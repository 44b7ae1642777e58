#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace satpep {

using EventAction = std::function<void()>;

struct EventHandle {
  std::uint64_t id = 0;
  explicit operator bool() const { return id != 0; }
};

// Timer surface shared by the virtual-time loop and the wall-clock reactor.
// All protocol state machines are written against this interface so the same
// code runs in simulation and on real sockets.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual std::uint64_t now_us() const = 0;
  virtual EventHandle schedule(std::uint64_t delay_us, EventAction action) = 0;
  virtual bool cancel(EventHandle handle) = 0;
};

struct LoopLimitExceeded : std::runtime_error {
  explicit LoopLimitExceeded(std::uint64_t cap)
      : std::runtime_error("event dispatch cap exceeded (" + std::to_string(cap) +
                           "); runaway retransmission loop?") {}
};

// Single-threaded virtual-time event loop. Time advances only when the next
// due event is dispatched; ties dispatch in insertion order.
class EventLoop final : public Executor {
 public:
  explicit EventLoop(std::uint64_t dispatch_cap = 100'000'000ull);

  std::uint64_t now_us() const override { return now_us_; }
  EventHandle schedule(std::uint64_t delay_us, EventAction action) override;
  bool cancel(EventHandle handle) override;

  // Dispatches until the queue is empty (including newly scheduled events).
  // Returns the clock value after the last event. Throws LoopLimitExceeded
  // when more than the configured cap of events has been dispatched.
  std::uint64_t run_until_idle();

  // Dispatches all events due at or before `deadline_us`, then sets the
  // clock to the deadline. Pending later events stay queued.
  std::uint64_t run_until(std::uint64_t deadline_us);

  // Stops run_until_idle()/run_until() after the current event returns.
  void stop() { stopped_ = true; }

  std::size_t pending() const { return live_ids_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Entry {
    std::uint64_t due_us;
    std::uint64_t seq;
    std::uint64_t id;
    EventAction action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.due_us != b.due_us) return a.due_us > b.due_us;
      return a.seq > b.seq;
    }
  };

  bool dispatch_next();

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::unordered_set<std::uint64_t> live_ids_;
  std::uint64_t now_us_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_id_ = 1;
  std::uint64_t dispatched_ = 0;
  std::uint64_t dispatch_cap_;
  bool running_ = false;
  bool stopped_ = false;
};

}  // namespace satpep
