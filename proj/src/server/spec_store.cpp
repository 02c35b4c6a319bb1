#include "reel/server/spec_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace reel::server {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSuffix = ".jsonl";

}  // namespace

SpecStore::SpecStore(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::string SpecStore::path_of(const std::string& spec_id) const {
  return (fs::path(dir_) / (spec_id + kSuffix)).string();
}

bool SpecStore::exists(const std::string& spec_id) const { return fs::exists(path_of(spec_id)); }

void SpecStore::write_line(const std::string& path, const nlohmann::json& record, bool create) {
  const std::string line = record.dump() + "\n";
  const int flags = O_WRONLY | O_APPEND | O_CLOEXEC | (create ? O_CREAT | O_EXCL : 0);
  const int fd = ::open(path.c_str(), flags, 0644);
  if (fd < 0) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  std::size_t done = 0;
  while (done < line.size()) {
    const auto n = ::write(fd, line.data() + done, line.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      const std::string err = std::strerror(errno);
      ::close(fd);
      throw std::runtime_error("write to " + path + " failed: " + err);
    }
    done += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

void SpecStore::create(const std::string& spec_id, const nlohmann::json& record) {
  std::lock_guard lock(mu_);
  write_line(path_of(spec_id), record, true);
}

void SpecStore::append(const std::string& spec_id, const nlohmann::json& record) {
  std::lock_guard lock(mu_);
  write_line(path_of(spec_id), record, false);
}

void SpecStore::remove(const std::string& spec_id) {
  std::lock_guard lock(mu_);
  std::error_code ec;
  fs::remove(path_of(spec_id), ec);
}

std::vector<SpecStore::Log> SpecStore::load_all() {
  std::lock_guard lock(mu_);
  std::vector<Log> out;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != kSuffix) continue;
    Log log;
    log.spec_id = entry.path().stem().string();
    std::ifstream in(entry.path(), std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    while (pos < content.size()) {
      const auto nl = content.find('\n', pos);
      if (nl == std::string::npos) {
        log.truncated_tail = true;
        break;
      }
      auto j = nlohmann::json::parse(content.begin() + static_cast<std::ptrdiff_t>(pos),
                                     content.begin() + static_cast<std::ptrdiff_t>(nl), nullptr, false);
      if (j.is_discarded()) {
        // Only a torn last line is tolerated; corruption earlier is fatal.
        if (nl + 1 < content.size())
          throw std::runtime_error("corrupt record in " + entry.path().string());
        log.truncated_tail = true;
        break;
      }
      log.records.push_back(std::move(j));
      pos = nl + 1;
    }
    // Cut a torn tail so the next append starts on a fresh line.
    if (log.truncated_tail) fs::resize_file(entry.path(), pos);
    out.push_back(std::move(log));
  }
  std::sort(out.begin(), out.end(), [](const Log& a, const Log& b) { return a.spec_id < b.spec_id; });
  return out;
}

}  // namespace reel::server
