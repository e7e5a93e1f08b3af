#include "postedit/zip.hpp"

#include <cstdint>
#include <limits>

#include <zlib.h>

#include "postedit/error.hpp"

namespace postedit::zip {

namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::uint16_t kVersion = 20;
constexpr std::uint16_t kUtf8NameFlag = 0x0800;
constexpr std::uint16_t kStored = 0;
constexpr std::uint16_t kDeflated = 8;
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::CorruptArchive, "corrupt zip archive: " + what);
}

void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>(v >> 8);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return static_cast<std::uint16_t>(byte(at) | (byte(at + 1) << 8));
  }
  std::uint32_t u32(std::size_t at) const {
    need(at, 4);
    return byte(at) | (byte(at + 1) << 8) | (byte(at + 2) << 16) |
           (static_cast<std::uint32_t>(byte(at + 3)) << 24);
  }
  std::string_view bytes(std::size_t at, std::size_t n) const {
    need(at, n);
    return data_.substr(at, n);
  }
  std::size_t size() const { return data_.size(); }

 private:
  std::uint32_t byte(std::size_t at) const { return static_cast<unsigned char>(data_[at]); }
  void need(std::size_t at, std::size_t n) const {
    if (at > data_.size() || n > data_.size() - at) corrupt("truncated");
  }

  std::string_view data_;
};

std::uint32_t crc_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  return static_cast<std::uint32_t>(
      crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::string deflate_raw(std::string_view data) {
  z_stream zs{};
  if (deflateInit2(&zs, 6, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw Error(ErrorCode::IoError, "deflateInit2 failed");
  std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = ::deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::IoError, "deflate failed");
  out.resize(zs.total_out);
  return out;
}

std::string inflate_raw(std::string_view data, std::size_t expected) {
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) corrupt("inflateInit2 failed");
  std::string out(expected + 1, '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = ::inflate(&zs, Z_FINISH);
  auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) corrupt("bad deflate stream");
  out.resize(expected);
  return out;
}

}  // namespace

std::string write(const std::vector<Entry>& entries) {
  std::string out;
  std::string central;
  for (const auto& entry : entries) {
    if (entry.name.size() > std::numeric_limits<std::uint16_t>::max() ||
        entry.data.size() > std::numeric_limits<std::uint32_t>::max() ||
        out.size() > std::numeric_limits<std::uint32_t>::max())
      throw Error(ErrorCode::InvalidArgument, "entry too large for a zip archive");

    const auto crc = crc_of(entry.data);
    std::string compressed = deflate_raw(entry.data);
    std::uint16_t method = kDeflated;
    std::string_view payload = compressed;
    if (compressed.size() >= entry.data.size()) {
      method = kStored;
      payload = entry.data;
    }
    const auto offset = static_cast<std::uint32_t>(out.size());
    const auto name_len = static_cast<std::uint16_t>(entry.name.size());

    put32(out, kLocalHeaderSig);
    put16(out, kVersion);
    put16(out, kUtf8NameFlag);
    put16(out, method);
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, static_cast<std::uint32_t>(payload.size()));
    put32(out, static_cast<std::uint32_t>(entry.data.size()));
    put16(out, name_len);
    put16(out, 0);
    out += entry.name;
    out += payload;

    put32(central, kCentralHeaderSig);
    put16(central, kVersion);
    put16(central, kVersion);
    put16(central, kUtf8NameFlag);
    put16(central, method);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, static_cast<std::uint32_t>(payload.size()));
    put32(central, static_cast<std::uint32_t>(entry.data.size()));
    put16(central, name_len);
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attributes
    put32(central, 0);  // external attributes
    put32(central, offset);
    central += entry.name;
  }
  const auto central_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndOfCentralDirSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, central_offset);
  put16(out, 0);
  return out;
}

std::vector<Entry> read(std::string_view archive) {
  Reader in(archive);
  if (archive.size() < 22) corrupt("too short");

  std::size_t eocd = std::string_view::npos;
  const std::size_t lowest = archive.size() > 22 + 0xffff ? archive.size() - 22 - 0xffff : 0;
  for (std::size_t pos = archive.size() - 22 + 1; pos-- > lowest;) {
    if (in.u32(pos) == kEndOfCentralDirSig) {
      eocd = pos;
      break;
    }
  }
  if (eocd == std::string_view::npos) corrupt("end of central directory not found");

  const auto count = in.u16(eocd + 10);
  const auto central_size = in.u32(eocd + 12);
  const auto central_offset = in.u32(eocd + 16);
  if (central_offset == 0xffffffffu) corrupt("zip64 archives are not supported");
  if (static_cast<std::size_t>(central_offset) + central_size > eocd)
    corrupt("central directory out of range");

  std::vector<Entry> entries;
  entries.reserve(count);
  std::size_t pos = central_offset;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (in.u32(pos) != kCentralHeaderSig) corrupt("bad central directory header");
    const auto flags = in.u16(pos + 8);
    const auto method = in.u16(pos + 10);
    const auto crc = in.u32(pos + 16);
    const auto compressed_size = in.u32(pos + 20);
    const auto size = in.u32(pos + 24);
    const auto name_len = in.u16(pos + 28);
    const auto extra_len = in.u16(pos + 30);
    const auto comment_len = in.u16(pos + 32);
    const auto local_offset = in.u32(pos + 42);
    std::string name(in.bytes(pos + 46, name_len));
    pos += 46 + name_len + extra_len + comment_len;

    if (flags & 0x1) corrupt("encrypted entries are not supported");
    if (in.u32(local_offset) != kLocalHeaderSig) corrupt("bad local header for " + name);
    const auto local_name_len = in.u16(local_offset + 26);
    const auto local_extra_len = in.u16(local_offset + 28);
    auto payload = in.bytes(local_offset + 30 + local_name_len + local_extra_len, compressed_size);

    std::string data;
    if (method == kStored) {
      if (compressed_size != size) corrupt("stored size mismatch for " + name);
      data = std::string(payload);
    } else if (method == kDeflated) {
      data = inflate_raw(payload, size);
    } else {
      corrupt("unsupported compression method " + std::to_string(method));
    }
    if (crc_of(data) != crc) corrupt("CRC mismatch for " + name);
    if (!name.empty() && name.back() == '/') continue;  // directory entry
    entries.push_back({std::move(name), std::move(data)});
  }
  return entries;
}

}  // namespace postedit::zip
