#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "crossbound/analysis.hpp"

namespace crossbound {

/// Identity of one sweep cell. Results are reusable only within the same
/// code version and solver tolerance.
struct CacheKey {
  std::string version;
  std::string klass;
  double beta = 0.0;
  double L = 0.0;
  int N = 0;
  double tol = 0.0;

  std::string canonical() const;
};

/// Append-only keyed store of sweep records, one JSON file per entry.
/// Writes are write-temp-then-rename, so concurrent writers of the same
/// deterministic payload are harmless; a key that maps to a different
/// payload raises CacheIntegrityError.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<SweepRecord> get(const CacheKey& key) const;
  void put(const CacheKey& key, const SweepRecord& record);

  /// Cache directory from the CROSSBOUND_CACHE_DIR environment variable.
  static std::optional<std::filesystem::path> env_dir();

 private:
  std::filesystem::path entry_path(const CacheKey& key) const;
  std::filesystem::path dir_;
};

}  // namespace crossbound
