#include "streetlab/service/event_buffer.hpp"

namespace streetlab::service {

std::string_view to_string(EventCategory c) {
  switch (c) {
    case EventCategory::BtStatus: return "bt-status";
    case EventCategory::Signal: return "signal";
    case EventCategory::Log: return "log";
  }
  return "log";
}

nlohmann::json to_json(const EventRecord& r) {
  return {{"seq", r.seq}, {"time", r.time}, {"category", to_string(r.category)}, {"body", r.body}};
}

std::string to_line(const EventRecord& r) { return to_json(r).dump() + "\n"; }

EventBuffer::EventBuffer(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

std::uint64_t EventBuffer::append(double time, EventCategory category, nlohmann::json body) {
  std::uint64_t seq = 0;
  {
    std::lock_guard lock(mu_);
    seq = next_++;
    records_.push_back({seq, time, category, std::move(body)});
    while (records_.size() > capacity_) records_.pop_front();
  }
  cv_.notify_all();
  return seq;
}

EventBuffer::Slice EventBuffer::since(std::uint64_t since, std::size_t limit) const {
  std::lock_guard lock(mu_);
  Slice out;
  if (records_.empty()) return out;
  const std::uint64_t first = records_.front().seq;
  out.truncated = since + 1 < first;
  std::size_t start = since + 1 <= first ? 0 : static_cast<std::size_t>(since + 1 - first);
  for (std::size_t i = start; i < records_.size() && out.records.size() < limit; ++i) out.records.push_back(records_[i]);
  return out;
}

std::uint64_t EventBuffer::wait_after(std::uint64_t since, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || next_ - 1 > since; });
  return next_ - 1;
}

void EventBuffer::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool EventBuffer::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::uint64_t EventBuffer::last_seq() const {
  std::lock_guard lock(mu_);
  return next_ - 1;
}

std::uint64_t EventBuffer::first_retained() const {
  std::lock_guard lock(mu_);
  return records_.empty() ? next_ : records_.front().seq;
}

}  // namespace streetlab::service
