#pragma once

#include <exception>
#include <vector>

#include "acp/jet.hpp"

namespace acp {

enum class Execution { Serial, Parallel };

/// Execution used when a caller does not ask for one. Parallel unless
/// changed, e.g. by the CLI's --serial flag.
Execution default_execution();
void set_default_execution(Execution e);

/// Applies f to every point and returns the results in input order. The
/// parallel path distributes points over OpenMP threads; the serial path is
/// the reference implementation. The first exception (in point order) is
/// rethrown after all points ran.
template <class F>
auto map_points(const std::vector<Point>& pts, F&& f, Execution ex = default_execution())
    -> std::vector<decltype(f(pts.front()))> {
  using R = decltype(f(pts.front()));
  const long n = static_cast<long>(pts.size());
  std::vector<R> out(pts.size());
  std::vector<std::exception_ptr> errors(pts.size());
  if (ex == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = f(pts[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = f(pts[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Same over an index range [0, n).
template <class F>
auto map_indices(long n, F&& f, Execution ex = default_execution()) -> std::vector<decltype(f(0L))> {
  using R = decltype(f(0L));
  std::vector<R> out(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  if (ex == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace acp
