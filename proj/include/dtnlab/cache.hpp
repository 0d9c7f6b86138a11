#pragma once

#include "dtnlab/dtn.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace dtn {

inline constexpr std::uint32_t kCacheVersion = 1;

/// SHA-1 of the git blob object for `content` ("blob <size>\0<content>"), hex encoded.
std::string content_hash(std::string_view content);

/// Canonical description identifying an operator build.
std::string operator_cache_key(const PlanarDomain& domain, const PotentialField& V, Provenance backend,
                               std::size_t resolution, std::size_t max_mode);

/// <dir>/<content_hash(key)>.dtn
std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& key);

/// Writes eigenvalues, eigenvectors and weights with a version stamp and the key.
void save_operator(const std::filesystem::path& file, const std::string& key, const DtnOperator& op);

enum class CacheStatus { hit, missing, stale };

struct CacheLookup {
  CacheStatus status = CacheStatus::missing;
  std::optional<DtnOperator> op;
  std::string message;
};

/// Loads a cached operator onto `boundary`. A file with a different version,
/// key, or node layout reports `stale` so the caller rebuilds.
CacheLookup load_operator(const std::filesystem::path& file, const std::string& key,
                          std::shared_ptr<const BoundarySpace> boundary, const PotentialField& V);

}  // namespace dtn
