#include "parapipe/io.hpp"

#include <lzma.h>
#include <openssl/evp.h>
#include <zlib.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "parapipe/hashing.hpp"

namespace parapipe {
namespace {

class FileSource : public ByteSource {
 public:
  explicit FileSource(const std::filesystem::path& path) {
    if (path == "-") {
      file_ = stdin;
      owned_ = false;
    } else {
      file_ = std::fopen(path.c_str(), "rb");
      if (file_ == nullptr) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
    }
  }
  ~FileSource() override {
    if (owned_ && file_ != nullptr) std::fclose(file_);
  }
  FileSource(const FileSource&) = delete;
  FileSource& operator=(const FileSource&) = delete;

  std::size_t read(char* buffer, std::size_t size) override {
    const std::size_t got = std::fread(buffer, 1, size, file_);
    if (got == 0 && std::ferror(file_)) throw std::runtime_error("read error");
    return got;
  }

 private:
  std::FILE* file_ = nullptr;
  bool owned_ = true;
};

class GzipSource : public ByteSource {
 public:
  explicit GzipSource(const std::filesystem::path& path) : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw std::runtime_error("cannot open " + path.string());
    gzbuffer(file_, 1 << 17);
  }
  ~GzipSource() override { gzclose(file_); }
  GzipSource(const GzipSource&) = delete;
  GzipSource& operator=(const GzipSource&) = delete;

  std::size_t read(char* buffer, std::size_t size) override {
    const int got = gzread(file_, buffer, static_cast<unsigned>(size));
    if (got < 0) {
      int code = 0;
      throw DataError(std::string("gzip: ") + gzerror(file_, &code));
    }
    return static_cast<std::size_t>(got);
  }

 private:
  gzFile file_;
};

class XzSource : public ByteSource {
 public:
  explicit XzSource(const std::filesystem::path& path) : raw_(path) {
    if (lzma_stream_decoder(&stream_, UINT64_MAX, LZMA_CONCATENATED) != LZMA_OK) {
      throw std::runtime_error("lzma decoder init failed");
    }
  }
  ~XzSource() override { lzma_end(&stream_); }
  XzSource(const XzSource&) = delete;
  XzSource& operator=(const XzSource&) = delete;

  std::size_t read(char* buffer, std::size_t size) override {
    if (finished_) return 0;
    stream_.next_out = reinterpret_cast<std::uint8_t*>(buffer);
    stream_.avail_out = size;
    while (stream_.avail_out == size) {
      lzma_action action = LZMA_RUN;
      if (stream_.avail_in == 0) {
        const std::size_t got = raw_.read(input_.data(), input_.size());
        stream_.next_in = reinterpret_cast<const std::uint8_t*>(input_.data());
        stream_.avail_in = got;
        if (got == 0) action = LZMA_FINISH;
      }
      const lzma_ret ret = lzma_code(&stream_, action);
      if (ret == LZMA_STREAM_END) {
        finished_ = true;
        break;
      }
      if (ret != LZMA_OK) throw DataError("xz: corrupt stream (lzma code " + std::to_string(ret) + ")");
    }
    return size - stream_.avail_out;
  }

 private:
  FileSource raw_;
  lzma_stream stream_ = LZMA_STREAM_INIT;
  std::array<char, 1 << 16> input_{};
  bool finished_ = false;
};

class StringSource : public ByteSource {
 public:
  explicit StringSource(std::string data) : data_(std::move(data)) {}
  std::size_t read(char* buffer, std::size_t size) override {
    const std::size_t n = std::min(size, data_.size() - pos_);
    std::memcpy(buffer, data_.data() + pos_, n);
    pos_ += n;
    return n;
  }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<ByteSource> open_source(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".gz") return std::make_unique<GzipSource>(path);
  if (ext == ".xz") return std::make_unique<XzSource>(path);
  return std::make_unique<FileSource>(path);
}

std::unique_ptr<ByteSource> string_source(std::string data) {
  return std::make_unique<StringSource>(std::move(data));
}

LineReader::LineReader(std::unique_ptr<ByteSource> source) : source_(std::move(source)) {}

bool LineReader::fill() {
  if (eof_) return false;
  if (pos_ > 0) {
    buffer_.erase(0, pos_);
    pos_ = 0;
  }
  const std::size_t old = buffer_.size();
  buffer_.resize(old + (1 << 16));
  const std::size_t got = source_->read(buffer_.data() + old, 1 << 16);
  buffer_.resize(old + got);
  if (got == 0) eof_ = true;
  return got > 0;
}

bool LineReader::next(std::string& line) {
  std::size_t scan_from = pos_;
  while (true) {
    const auto newline = buffer_.find('\n', scan_from);
    if (newline != std::string::npos) {
      line.assign(buffer_, pos_, newline - pos_);
      pos_ = newline + 1;
      ++line_no_;
      return true;
    }
    scan_from = buffer_.size() - pos_;
    if (!fill()) break;
  }
  if (pos_ < buffer_.size()) {
    line.assign(buffer_, pos_, std::string::npos);
    pos_ = buffer_.size();
    ++line_no_;
    return true;
  }
  return false;
}

std::string read_file(const std::filesystem::path& path) {
  auto source = open_source(path);
  std::string out;
  std::array<char, 1 << 16> chunk{};
  while (const std::size_t got = source->read(chunk.data(), chunk.size())) out.append(chunk.data(), got);
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::string to_hex(const unsigned char* digest, unsigned len) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 init failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const char* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_, digest.data(), &len);
    return to_hex(digest.data(), len);
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  // Digest of the bytes on disk, not the decompressed stream.
  FileSource source(path);
  Sha256 sha;
  std::array<char, 1 << 16> chunk{};
  while (const std::size_t got = source.read(chunk.data(), chunk.size())) sha.update(chunk.data(), got);
  return sha.hex();
}

std::string sha256_hex(std::string_view bytes) {
  Sha256 sha;
  sha.update(bytes.data(), bytes.size());
  return sha.hex();
}

}  // namespace parapipe
