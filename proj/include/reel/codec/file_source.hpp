#pragma once

#include <memory>
#include <string>
#include <vector>

#include "reel/codec/tvc.hpp"

namespace reel {

/// Positional reads from a file kept open for the reader's lifetime.
class FileReader final : public ByteReader {
 public:
  /// Throws CodecError if the file cannot be opened.
  explicit FileReader(const std::string& path);
  ~FileReader() override;
  FileReader(const FileReader&) = delete;
  FileReader& operator=(const FileReader&) = delete;

  std::uint64_t size() const override { return size_; }
  void read(std::uint64_t offset, std::span<std::uint8_t> out) const override;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
};

/// A container read through any ByteReader. Probing touches only the header
/// and index; each GOP is fetched on demand as one contiguous range.
class ReaderSource final : public VideoSource {
 public:
  explicit ReaderSource(std::shared_ptr<const ByteReader> reader);

  const TvcInfo& info() const override { return info_; }
  GopData gop_data(std::uint32_t ordinal) const override;

 private:
  std::shared_ptr<const ByteReader> reader_;
  TvcInfo info_;
};

/// Opens and probes a TVC file.
VideoSourcePtr open_file_source(const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
/// Writes via a temporary file and rename so readers never see a partial file.
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace reel
