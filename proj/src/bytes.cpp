#include "hypersketch/bytes.hpp"

#include "hypersketch/errors.hpp"

namespace hypersketch {

std::uint64_t ByteReader::get(int width) {
  if (remaining() < static_cast<std::size_t>(width)) throw InputError("truncated binary data");
  std::uint64_t v = 0;
  for (int i = width - 1; i >= 0; --i) v = (v << 8) | data_[pos_ + static_cast<std::size_t>(i)];
  pos_ += static_cast<std::size_t>(width);
  return v;
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t len) {
  if (remaining() < len) throw InputError("truncated binary data");
  auto out = data_.subspan(pos_, len);
  pos_ += len;
  return out;
}

std::string ByteReader::str() {
  std::uint32_t len = u32();
  auto bytes = raw(len);
  return std::string(bytes.begin(), bytes.end());
}

}  // namespace hypersketch
