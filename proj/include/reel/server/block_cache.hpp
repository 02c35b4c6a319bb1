#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "reel/codec/file_source.hpp"

namespace reel::server {

struct BlockCacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t backend_reads = 0;
  std::uint64_t evictions = 0;
  std::uint64_t resident_bytes = 0;
};

/// Shared LRU cache of fixed-size file blocks keyed by (path, block index).
/// Blocks are immutable once loaded; source files are assumed not to change
/// while the server runs.
class BlockCache {
 public:
  static constexpr std::size_t kDefaultBlockSize = 64 * 1024;

  explicit BlockCache(std::uint64_t budget_bytes, std::size_t block_size = kDefaultBlockSize);

  /// Copies [offset, offset + out.size()) of `file` into `out`, loading
  /// missing blocks from the file.
  void read(const FileReader& file, std::uint64_t offset, std::span<std::uint8_t> out);

  BlockCacheStats stats() const;
  std::size_t block_size() const { return block_size_; }
  std::uint64_t budget() const { return budget_; }

 private:
  using Key = std::pair<std::string, std::uint64_t>;
  using Block = std::shared_ptr<const std::vector<std::uint8_t>>;
  struct Entry {
    Block block;
    std::list<Key>::iterator lru;
  };

  Block fetch(const FileReader& file, std::uint64_t index);

  std::uint64_t budget_;
  std::size_t block_size_;
  mutable std::mutex mu_;
  std::map<Key, Entry> entries_;
  std::list<Key> lru_;  // front = most recent
  BlockCacheStats stats_;
};

/// ByteReader over one file whose reads go through a shared BlockCache.
class CachedReader final : public ByteReader {
 public:
  CachedReader(std::shared_ptr<BlockCache> cache, const std::string& path);

  std::uint64_t size() const override { return file_.size(); }
  void read(std::uint64_t offset, std::span<std::uint8_t> out) const override;

 private:
  std::shared_ptr<BlockCache> cache_;
  FileReader file_;
};

}  // namespace reel::server
