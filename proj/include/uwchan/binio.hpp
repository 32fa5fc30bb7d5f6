// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "uwchan/errors.hpp"

namespace uwchan {

/// Little-endian binary writer with a running byte-sum checksum
/// (sum of payload bytes mod 2^64). Writes to a temp file and renames on
/// commit so interrupted runs never leave a partial artifact.
class BinWriter {
 public:
  explicit BinWriter(const std::string& path)
      : path_(path), tmp_(path + ".tmp"), out_(tmp_, std::ios::binary) {
    if (!out_) throw IoError("cannot open for write: " + tmp_);
  }

  ~BinWriter() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

  void u8(uint8_t v) { raw(&v, 1); }
  void u32(uint32_t v) {
    uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
    raw(b, 4);
  }
  void u64(uint64_t v) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
    raw(b, 8);
  }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
  void bytes(const void* p, std::size_t n) { raw(p, n); }

  uint64_t checksum() const { return checksum_; }
  void reset_checksum() { checksum_ = 0; }

  /// Append the running checksum (not itself checksummed) and atomically
  /// move the temp file into place.
  void commit_with_checksum() {
    const uint64_t sum = checksum_;
    u64(sum);
    commit();
  }

  void commit() {
    out_.flush();
    if (!out_) throw IoError("write failed: " + tmp_);
    out_.close();
    std::error_code ec;
    std::filesystem::rename(tmp_, path_, ec);
    if (ec) throw IoError("rename failed: " + tmp_ + " -> " + path_);
    committed_ = true;
  }

 private:
  void raw(const void* p, std::size_t n) {
    const uint8_t* b = static_cast<const uint8_t*>(p);
    for (std::size_t i = 0; i < n; ++i) checksum_ += b[i];
    out_.write(reinterpret_cast<const char*>(p),
               static_cast<std::streamsize>(n));
    if (!out_) throw IoError("write failed: " + tmp_);
  }

  std::string path_, tmp_;
  std::ofstream out_;
  uint64_t checksum_ = 0;
  bool committed_ = false;
};

/// Little-endian binary reader tracking the current offset for error
/// reporting and the same byte-sum checksum as BinWriter.
class BinReader {
 public:
  explicit BinReader(const std::string& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for read: " + path);
    in.seekg(0, std::ios::end);
    buf_.resize(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(buf_.data()),
            static_cast<std::streamsize>(buf_.size()));
    if (!in) throw IoError("read failed: " + path);
  }

  uint8_t u8() {
    need(1);
    return take();
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(take()) << (8 * i);
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(take()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void bytes(void* p, std::size_t n) {
    need(n);
    std::memcpy(p, buf_.data() + pos_, n);
    for (std::size_t i = 0; i < n; ++i) checksum_ += buf_[pos_ + i];
    pos_ += n;
  }

  std::size_t offset() const { return pos_; }
  std::size_t size() const { return buf_.size(); }
  uint64_t checksum() const { return checksum_; }
  void reset_checksum() { checksum_ = 0; }

  void need(std::size_t n) const {
    if (pos_ + n > buf_.size())
      throw FormatError(path_ + ": truncated at offset " +
                        std::to_string(pos_) + ": expected " +
                        std::to_string(pos_ + n) + " bytes, file has " +
                        std::to_string(buf_.size()));
  }

 private:
  uint8_t take() {
    checksum_ += buf_[pos_];
    return buf_[pos_++];
  }

  std::string path_;
  std::vector<uint8_t> buf_;
  std::size_t pos_ = 0;
  uint64_t checksum_ = 0;
};

/// Byte-sum (mod 2^64) of an arbitrary file; used for run manifests.
inline uint64_t file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  uint64_t sum = 0;
  char chunk[65536];
  while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i)
      sum += static_cast<uint8_t>(chunk[i]);
    if (got < static_cast<std::streamsize>(sizeof chunk)) break;
  }
  return sum;
}

}  // namespace uwchan
