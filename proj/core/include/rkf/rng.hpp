#pragma once

#include <cstdint>
#include <initializer_list>

#include <Eigen/Dense>

namespace rkf {

/// Counter-based generator: draw i of a stream is a pure function of
/// (key, i), so streams keyed by run identity are independent of thread
/// scheduling. Normals use Box–Muller on consecutive uniform pairs.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Stream key derived from a base seed and a path of indices.
  static std::uint64_t derive(std::uint64_t base, std::initializer_list<std::uint64_t> path);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace rkf
