#include "crossbound/cache.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "crossbound/errors.hpp"
#include "crossbound/exporters.hpp"

namespace crossbound {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string CacheKey::canonical() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "version=%s;class=%s;beta=%.17g;L=%.17g;N=%d;tol=%.17g",
                version.c_str(), klass.c_str(), beta, L, N, tol);
  return buf;
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ResultCache::entry_path(const CacheKey& key) const {
  char name[32];
  std::snprintf(name, sizeof(name), "%016llx.json",
                static_cast<unsigned long long>(fnv1a64(key.canonical())));
  return dir_ / name;
}

std::optional<SweepRecord> ResultCache::get(const CacheKey& key) const {
  const auto path = entry_path(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  const std::string text = read_file(path);
  const auto sep = text.find('\n');
  if (sep == std::string::npos) {
    throw CacheIntegrityError("malformed cache entry " + path.string());
  }
  if (text.substr(0, sep) != key.canonical()) {
    throw CacheIntegrityError("cache entry " + path.string() +
                              " belongs to a different key (hash collision?)");
  }
  return record_from_json(text.substr(sep + 1));
}

void ResultCache::put(const CacheKey& key, const SweepRecord& record) {
  const auto path = entry_path(key);
  const std::string payload = key.canonical() + "\n" + record_to_json(record);

  if (std::filesystem::exists(path)) {
    if (read_file(path) != payload) {
      throw CacheIntegrityError("cache entry " + path.string() +
                                " already holds a different payload for this key");
    }
    return;  // identical entry already present
  }

  // Atomic per-entry write: temp file in the same directory, then rename.
  const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << payload;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cache write failed: " + ec.message());
  }
}

std::optional<std::filesystem::path> ResultCache::env_dir() {
  if (const char* dir = std::getenv("CROSSBOUND_CACHE_DIR"); dir && *dir) {
    return std::filesystem::path(dir);
  }
  return std::nullopt;
}

}  // namespace crossbound
