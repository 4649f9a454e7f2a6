#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

namespace coopgeo {

// Discrete-event queue. Events leave in nondecreasing time order; events
// scheduled for the same instant leave in scheduling order.
template <typename Payload>
class EventQueue {
 public:
  using Handle = std::uint64_t;

  struct Event {
    double time;
    Handle seq;
    Payload payload;
  };

  Handle schedule(double time, Payload payload) {
    const Handle h = state_.size();
    heap_.push(Event{time, h, std::move(payload)});
    state_.push_back(State::Pending);
    ++live_;
    return h;
  }

  // No-op for events that already fired or were cancelled.
  void cancel(Handle h) {
    if (h < state_.size() && state_[h] == State::Pending) {
      state_[h] = State::Cancelled;
      --live_;
    }
  }

  bool empty() const { return live_ == 0; }

  std::optional<Event> pop() {
    while (!heap_.empty()) {
      Event ev = heap_.top();
      heap_.pop();
      if (state_[ev.seq] != State::Pending) continue;
      state_[ev.seq] = State::Fired;
      --live_;
      now_ = ev.time;
      return ev;
    }
    return std::nullopt;
  }

  double now() const { return now_; }

 private:
  enum class State : std::uint8_t { Pending, Cancelled, Fired };

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::vector<State> state_;
  std::size_t live_{0};
  double now_{0.0};
};

}  // namespace coopgeo
