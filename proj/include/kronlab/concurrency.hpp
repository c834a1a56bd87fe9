#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kronlab {

inline unsigned default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Insert-only memo table: concurrent readers, serialized writers.
///
/// Entries are never modified once present. When two threads race on the
/// same key the first value stored wins; both computed values are equal
/// because every producer is a pure function of the key.
template <class Key, class Value, class Hash = std::hash<Key>>
class ConcurrentMemo {
 public:
  const Value* find(const Key& key) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
  }

  const Value& insert(Key key, Value value) {
    std::unique_lock lock(mutex_);
    return map_.try_emplace(std::move(key), std::move(value)).first->second;
  }

  template <class Producer>
  const Value& get_or_compute(const Key& key, Producer&& produce) {
    if (const Value* hit = find(key)) return *hit;
    return insert(key, produce());
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
  }

  template <class F>
  void for_each(F&& f) const {
    std::shared_lock lock(mutex_);
    for (const auto& [k, v] : map_) f(k, v);
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Value, Hash> map_;
};

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Work is pulled
/// from a shared counter; callers write results into slot i so the outcome
/// does not depend on scheduling. The first exception (by index) is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
  threads.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace kronlab
