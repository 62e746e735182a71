#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "slabprobe/solver/stiffness.hpp"

namespace slabprobe::solver {

/// Factorized systems keyed by (mesh hash, gamma hash). Thread-safe.
class SystemCache {
 public:
  std::shared_ptr<const StiffnessSystem> get(std::shared_ptr<const geometry::TriMesh> mesh,
                                             const probe::GammaField& gamma);

  std::size_t hits() const;
  std::size_t misses() const;
  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const StiffnessSystem>> systems_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace slabprobe::solver
