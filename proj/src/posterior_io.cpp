#include "scribeforge/posterior_io.hpp"

#include "scribeforge/errors.hpp"
#include "scribeforge/image_io.hpp"

#include <bit>
#include <cstring>
#include <string>

namespace scribeforge {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'C', 'P'};
constexpr std::uint8_t kVersion = 0x01;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

class Reader {
public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string("CTCP1: truncated ") + what);
    }
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32("posterior values")); }
  std::uint8_t byte(const char* what) {
    need(1, what);
    return bytes_[pos_++];
  }
  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    std::string_view v(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> encode_ctcp(const PosteriorMatrix& posteriors, const Alphabet& alphabet) {
  if (posteriors.columns() != alphabet.size() + 1) {
    throw InvalidArgument("CTCP1: column count must be alphabet size + 1");
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kVersion);
  put_u32(out, static_cast<std::uint32_t>(posteriors.frames()));
  put_u32(out, static_cast<std::uint32_t>(posteriors.columns()));
  out.reserve(out.size() + posteriors.values().size() * 4 + 64);
  for (float v : posteriors.values()) {
    put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  const std::string symbols = alphabet.to_utf8();
  put_u32(out, static_cast<std::uint32_t>(symbols.size()));
  out.insert(out.end(), symbols.begin(), symbols.end());
  return out;
}

PosteriorFile decode_ctcp(const std::vector<std::uint8_t>& bytes) {
  Reader in(bytes);
  const auto magic = in.take(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw FormatError("CTCP1: bad magic bytes (expected \"CTCP\")");
  }
  const std::uint8_t version = in.byte("version");
  if (version != kVersion) {
    throw FormatError("CTCP1: unsupported version " + std::to_string(version));
  }
  const std::uint32_t frames = in.u32("frame count");
  const std::uint32_t columns = in.u32("column count");
  const std::uint64_t count = static_cast<std::uint64_t>(frames) * columns;
  in.need(count * 4, "posterior values");
  std::vector<float> values;
  values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    values.push_back(in.f32());
  }
  const std::uint32_t n = in.u32("alphabet length");
  Alphabet alphabet;
  try {
    alphabet = Alphabet::from_utf8(in.take(n, "alphabet"));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("CTCP1: ") + e.what());
  }
  if (!in.done()) {
    throw FormatError("CTCP1: trailing bytes after alphabet");
  }
  if (columns != alphabet.size() + 1) {
    throw FormatError("CTCP1: " + std::to_string(columns) + " columns but alphabet has " +
                      std::to_string(alphabet.size()) + " symbols");
  }
  try {
    return PosteriorFile{PosteriorMatrix(frames, columns, std::move(values)), std::move(alphabet)};
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("CTCP1: ") + e.what());
  }
}

PosteriorFile read_posterior_file(const std::filesystem::path& path) {
  try {
    return decode_ctcp(read_file_bytes(path));
  } catch (const FormatError& e) {
    throw FormatError("'" + path.string() + "': " + e.what());
  }
}

void write_posterior_file(const std::filesystem::path& path, const PosteriorMatrix& posteriors,
                          const Alphabet& alphabet) {
  write_file_bytes(path, encode_ctcp(posteriors, alphabet));
}

} // namespace scribeforge
