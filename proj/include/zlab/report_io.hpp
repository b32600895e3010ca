#pragma once

// Deterministic text output and a small order-preserving worker pool.

#include "zlab/precision.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace zlab::io {

// Shortest-free, locale-independent: always 17 significant digits.
std::string format_number(double x);
inline std::string format_number(const Real& x) { return format_number(to_double(x)); }

// Minimal JSON string escaping.
std::string json_quote(const std::string& text);

// '#'-prefixed provenance lines, one "key: value" per entry.
struct Header {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) {
    entries.emplace_back(std::move(key), std::move(value));
  }
  std::string render() const;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render() const;
};

// Writes bytes verbatim; throws std::runtime_error if the file cannot be written.
void write_file(const std::string& path, const std::string& content);

int default_jobs();

// Applies fn to every item on up to `jobs` threads. Results keep input order.
// If any call throws, the exception of the lowest failing index is rethrown
// after all workers have stopped.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, int jobs, Fn&& fn)
    -> std::vector<decltype(fn(items.front()))> {
  using R = decltype(fn(items.front()));
  const std::size_t n = items.size();
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      try {
        slots[i].emplace(fn(items[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, jobs < 1 ? 1 : jobs));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace zlab::io
