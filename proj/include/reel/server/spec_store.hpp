#pragma once

#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace reel::server {

/// Append-only record logs, one JSON-lines file per spec under
/// `<dir>/<spec_id>.jsonl`. The first record creates the spec, later records
/// are accepted parts. Deleting a spec removes its file.
class SpecStore {
 public:
  /// Creates `dir` if needed.
  explicit SpecStore(std::string dir);

  const std::string& dir() const { return dir_; }
  bool exists(const std::string& spec_id) const;
  /// Starts a new log; throws std::runtime_error if one already exists.
  void create(const std::string& spec_id, const nlohmann::json& record);
  /// Appends one record and flushes it to disk before returning.
  void append(const std::string& spec_id, const nlohmann::json& record);
  void remove(const std::string& spec_id);

  struct Log {
    std::string spec_id;
    std::vector<nlohmann::json> records;
    /// A torn final line (crash mid-write) was dropped.
    bool truncated_tail = false;
  };
  /// Every log in the directory, sorted by spec id. A torn final line is cut
  /// from the file.
  std::vector<Log> load_all();

 private:
  std::string path_of(const std::string& spec_id) const;
  void write_line(const std::string& path, const nlohmann::json& record, bool create);

  std::string dir_;
  std::mutex mu_;
};

}  // namespace reel::server
