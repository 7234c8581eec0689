#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace streetlab::service {

enum class EventCategory { BtStatus, Signal, Log };
std::string_view to_string(EventCategory c);

struct EventRecord {
  std::uint64_t seq = 0;
  double time = 0.0;
  EventCategory category = EventCategory::Log;
  nlohmann::json body;
};

nlohmann::json to_json(const EventRecord& r);
/// One line of the event stream, newline included.
std::string to_line(const EventRecord& r);

constexpr std::size_t kDefaultReplayCapacity = 65536;

/// Append-only record sequence with a bounded replay window. Sequence
/// numbers start at 1 and never skip. Safe for concurrent use.
class EventBuffer {
 public:
  explicit EventBuffer(std::size_t capacity = kDefaultReplayCapacity);

  std::uint64_t append(double time, EventCategory category, nlohmann::json body);

  struct Slice {
    std::vector<EventRecord> records;
    /// True when records after `since` were already evicted.
    bool truncated = false;
  };
  /// Records with seq > since, at most `limit`.
  Slice since(std::uint64_t since, std::size_t limit = SIZE_MAX) const;

  /// Blocks until a record with seq > since exists, the buffer is closed or
  /// the timeout passes. Returns the newest seq.
  std::uint64_t wait_after(std::uint64_t since, std::chrono::milliseconds timeout) const;

  /// No more records will come; wakes every waiter.
  void close();
  bool closed() const;
  std::uint64_t last_seq() const;
  std::uint64_t first_retained() const;

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::size_t capacity_;
  std::deque<EventRecord> records_;
  std::uint64_t next_ = 1;
  bool closed_ = false;
};

}  // namespace streetlab::service
