#include "qsl/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "qsl/errors.hpp"

namespace qsl {

std::vector<double> TimeGrid::points() const {
  if (nodes < 2 || !(stop > start)) fail(ErrorKind::BadGrid, "grid needs >= 2 nodes and stop > start");
  std::vector<double> out(nodes);
  const double h = step();
  for (int i = 0; i < nodes; ++i) out[i] = start + h * i;
  out.back() = stop;
  return out;
}

double simpson(const std::vector<double>& values, double step) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0) fail(ErrorKind::BadGrid, "Simpson needs an odd node count >= 3");
  double acc = values.front() + values.back();
  for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  return acc * step / 3.0;
}

QuadratureResult simpson_adaptive(const std::function<std::vector<double>(int)>& sampler, double a, double b,
                                  int initial_nodes, double rel_tol, int max_nodes) {
  if (!(b > a)) fail(ErrorKind::BadGrid, "integration interval is empty");
  int nodes = initial_nodes % 2 == 0 ? initial_nodes + 1 : initial_nodes;
  if (nodes < 3) nodes = 3;
  double previous = simpson(sampler(nodes), (b - a) / (nodes - 1));
  QuadratureResult result{previous, nodes, INFINITY, false};
  while (true) {
    const int refined = 2 * (nodes - 1) + 1;
    if (refined > max_nodes) break;
    const double current = simpson(sampler(refined), (b - a) / (refined - 1));
    const double change = std::abs(current - previous) / std::max(std::abs(current), 1e-300);
    result = {current, refined, change, change <= rel_tol};
    if (result.converged) break;
    previous = current;
    nodes = refined;
  }
  return result;
}

QuadratureResult simpson_adaptive(const std::function<double(double)>& f, double a, double b, int initial_nodes,
                                  double rel_tol, int max_nodes) {
  auto sampler = [&](int nodes) {
    std::vector<double> v(nodes);
    const double h = (b - a) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) v[i] = f(i == nodes - 1 ? b : a + h * i);
    return v;
  };
  return simpson_adaptive(sampler, a, b, initial_nodes, rel_tol, max_nodes);
}

double clamped_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

Digest& Digest::add(std::string_view bytes) {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

Digest& Digest::add(double x) {
  char buf[sizeof(double)];
  std::memcpy(buf, &x, sizeof buf);
  return add(std::string_view(buf, sizeof buf));
}

Digest& Digest::add(std::int64_t x) {
  char buf[sizeof x];
  std::memcpy(buf, &x, sizeof buf);
  return add(std::string_view(buf, sizeof buf));
}

std::string Digest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
  return buf;
}

unsigned sweep_threads() {
  unsigned n = 0;
  if (const char* env = std::getenv("QSL_LAB_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n == 0 ? 1 : n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qsl
