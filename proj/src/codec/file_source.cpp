#include "reel/codec/file_source.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace reel {

namespace {

std::string errno_text() { return std::strerror(errno); }

}  // namespace

FileReader::FileReader(const std::string& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd_ < 0) throw CodecError("cannot open " + path + ": " + errno_text());
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    ::close(fd_);
    throw CodecError("cannot stat " + path + ": " + errno_text());
  }
  size_ = static_cast<std::uint64_t>(st.st_size);
}

FileReader::~FileReader() {
  if (fd_ >= 0) ::close(fd_);
}

void FileReader::read(std::uint64_t offset, std::span<std::uint8_t> out) const {
  if (offset > size_ || out.size() > size_ - offset)
    throw CodecError("read of " + std::to_string(out.size()) + " bytes at offset " +
                     std::to_string(offset) + " past end of " + path_);
  std::size_t done = 0;
  while (done < out.size()) {
    const auto n = ::pread(fd_, out.data() + done, out.size() - done,
                           static_cast<off_t>(offset + done));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw CodecError("read failed on " + path_ + ": " + (n == 0 ? "short file" : errno_text()));
    done += static_cast<std::size_t>(n);
  }
}

ReaderSource::ReaderSource(std::shared_ptr<const ByteReader> reader)
    : reader_(std::move(reader)), info_(probe(*reader_)) {}

GopData ReaderSource::gop_data(std::uint32_t ordinal) const {
  const auto begin = info_.gops.at(ordinal).byte_offset;
  const auto end = info_.gop_end(ordinal);
  auto buf = std::make_shared<std::vector<std::uint8_t>>(end - begin);
  reader_->read(begin, *buf);
  return GopData{buf, std::span<const std::uint8_t>(*buf)};
}

VideoSourcePtr open_file_source(const std::string& path) {
  return std::make_shared<ReaderSource>(std::make_shared<FileReader>(path));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  FileReader r(path);
  std::vector<std::uint8_t> out(r.size());
  r.read(0, out);
  return out;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CodecError("cannot write " + tmp);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw CodecError("write failed on " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CodecError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace reel
