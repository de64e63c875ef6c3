#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parapipe {

// Malformed input data. Carries the 1-based line number when known (0 otherwise).
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ByteSource {
 public:
  virtual ~ByteSource() = default;
  // Returns 0 at end of stream.
  virtual std::size_t read(char* buffer, std::size_t size) = 0;
};

// Opens a file for reading; ".gz" and ".xz" are decompressed transparently, "-" is stdin.
std::unique_ptr<ByteSource> open_source(const std::filesystem::path& path);

// In-memory source, mostly for tests.
std::unique_ptr<ByteSource> string_source(std::string data);

// Splits a byte stream on LF. A trailing CR is kept; callers decide about CRLF.
class LineReader {
 public:
  explicit LineReader(std::unique_ptr<ByteSource> source);
  explicit LineReader(const std::filesystem::path& path) : LineReader(open_source(path)) {}

  bool next(std::string& line);
  // 1-based number of the last line returned.
  std::size_t line_number() const { return line_no_; }

 private:
  bool fill();

  std::unique_ptr<ByteSource> source_;
  std::string buffer_;
  std::size_t pos_ = 0;
  bool eof_ = false;
  std::size_t line_no_ = 0;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace parapipe
