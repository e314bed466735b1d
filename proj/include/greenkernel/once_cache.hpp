#pragma once

#include <map>
#include <memory>
#include <mutex>

namespace greenkernel {

/// Read-mostly memo table: each key is built at most once, readers never block on
/// unrelated keys. If a build throws, the next caller retries it.
template <class Key, class Value>
class OnceCache {
 public:
  template <class Build>
  std::shared_ptr<const Value> get(const Key& key, Build&& build) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto& entry = slots_[key];
      if (!entry) entry = std::make_shared<Slot>();
      slot = entry;
    }
    std::lock_guard<std::mutex> lock(slot->mutex);
    if (!slot->value) slot->value = std::make_shared<const Value>(build());
    return slot->value;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return slots_.size();
  }

 private:
  struct Slot {
    std::mutex mutex;
    std::shared_ptr<const Value> value;
  };
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<Slot>> slots_;
};

}  // namespace greenkernel
