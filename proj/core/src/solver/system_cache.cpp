#include "slabprobe/solver/system_cache.hpp"

namespace slabprobe::solver {

std::shared_ptr<const StiffnessSystem> SystemCache::get(std::shared_ptr<const geometry::TriMesh> mesh,
                                                        const probe::GammaField& gamma) {
  const auto key = std::make_pair(mesh->hash(), gamma.hash());
  {
    std::lock_guard lock(mutex_);
    if (auto it = systems_.find(key); it != systems_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto system = assemble(std::move(mesh), gamma);
  std::lock_guard lock(mutex_);
  auto [it, inserted] = systems_.emplace(key, std::move(system));
  if (inserted) {
    ++misses_;
  } else {
    ++hits_;
  }
  return it->second;
}

std::size_t SystemCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t SystemCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

std::size_t SystemCache::size() const {
  std::lock_guard lock(mutex_);
  return systems_.size();
}

void SystemCache::clear() {
  std::lock_guard lock(mutex_);
  systems_.clear();
  hits_ = misses_ = 0;
}

}  // namespace slabprobe::solver
