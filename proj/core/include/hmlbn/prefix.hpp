#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace hmlbn {

enum class AddressFamily : std::uint8_t { V4 = 4, V6 = 6 };

/// IPv4/IPv6 address of a mobile host, or a prefix served by a mobile router.
/// Host bits beyond the prefix length are always zero.
class MobilePrefix {
 public:
  MobilePrefix() = default;
  MobilePrefix(AddressFamily family, const std::array<std::uint8_t, 16>& bytes, std::uint8_t length);

  /// Parses "10.1.1.1/32" or "2001:db8::1/128". A missing length means a host prefix.
  static MobilePrefix parse(std::string_view text);

  AddressFamily family() const noexcept { return family_; }
  std::uint8_t length() const noexcept { return length_; }
  const std::array<std::uint8_t, 16>& bytes() const noexcept { return bytes_; }
  std::size_t address_size() const noexcept { return family_ == AddressFamily::V4 ? 4 : 16; }
  std::uint8_t max_length() const noexcept { return family_ == AddressFamily::V4 ? 32 : 128; }
  bool is_host() const noexcept { return length_ == max_length(); }

  /// True when `other` lies entirely inside this prefix.
  bool contains(const MobilePrefix& other) const noexcept;

  std::string to_string() const;

  friend auto operator<=>(const MobilePrefix&, const MobilePrefix&) = default;

 private:
  AddressFamily family_ = AddressFamily::V4;
  std::array<std::uint8_t, 16> bytes_{};
  std::uint8_t length_ = 32;
};

}  // namespace hmlbn
