#include "hmlbn/prefix.hpp"

#include <arpa/inet.h>

#include <charconv>

#include "hmlbn/types.hpp"

namespace hmlbn {

MobilePrefix::MobilePrefix(AddressFamily family, const std::array<std::uint8_t, 16>& bytes, std::uint8_t length)
    : family_(family), bytes_(bytes), length_(length) {
  if (length_ > max_length()) {
    throw Error(Errc::InvalidArgument, "prefix length out of range");
  }
  for (std::size_t i = 0; i < bytes_.size(); ++i) {
    const int bit_start = static_cast<int>(i) * 8;
    if (i >= address_size() || bit_start >= length_) {
      bytes_[i] = 0;
    } else if (bit_start + 8 > length_) {
      const int keep = length_ - bit_start;
      bytes_[i] &= static_cast<std::uint8_t>(0xff << (8 - keep));
    }
  }
}

MobilePrefix MobilePrefix::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string address(text.substr(0, slash));
  std::array<std::uint8_t, 16> bytes{};
  AddressFamily family;
  if (inet_pton(AF_INET, address.c_str(), bytes.data()) == 1) {
    family = AddressFamily::V4;
  } else if (inet_pton(AF_INET6, address.c_str(), bytes.data()) == 1) {
    family = AddressFamily::V6;
  } else {
    throw Error(Errc::InvalidArgument, "malformed address '" + std::string(text) + "'");
  }
  unsigned length = family == AddressFamily::V4 ? 32 : 128;
  if (slash != std::string_view::npos) {
    const auto len_text = text.substr(slash + 1);
    auto [p, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), length);
    if (ec != std::errc{} || p != len_text.data() + len_text.size()) {
      throw Error(Errc::InvalidArgument, "malformed prefix length in '" + std::string(text) + "'");
    }
  }
  if (length > (family == AddressFamily::V4 ? 32u : 128u)) {
    throw Error(Errc::InvalidArgument, "prefix length out of range in '" + std::string(text) + "'");
  }
  return MobilePrefix(family, bytes, static_cast<std::uint8_t>(length));
}

bool MobilePrefix::contains(const MobilePrefix& other) const noexcept {
  if (family_ != other.family_ || other.length_ < length_) {
    return false;
  }
  int remaining = length_;
  for (std::size_t i = 0; remaining > 0; ++i, remaining -= 8) {
    const std::uint8_t mask = remaining >= 8 ? 0xff : static_cast<std::uint8_t>(0xff << (8 - remaining));
    if ((bytes_[i] & mask) != (other.bytes_[i] & mask)) {
      return false;
    }
  }
  return true;
}

std::string MobilePrefix::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  inet_ntop(family_ == AddressFamily::V4 ? AF_INET : AF_INET6, bytes_.data(), buf, sizeof(buf));
  return std::string(buf) + '/' + std::to_string(length_);
}

}  // namespace hmlbn
