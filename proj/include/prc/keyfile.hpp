#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "prc/watermark.hpp"

namespace prc::keyfile {

enum class KeyKind : std::uint8_t { Sub = 1, Idx = 2, Wm = 3 };

std::string_view kind_name(KeyKind k) noexcept;

struct WmBundle {
  wm::WatermarkParams params;
  wm::WatermarkKey key;
  bool operator==(const WmBundle&) const = default;
};

/// A key together with the parameters it was generated for.
using KeyFile = std::variant<wm::SubCode, wm::IdxCode, WmBundle>;

KeyKind kind_of(const KeyFile& k) noexcept;
bool is_demo(const KeyFile& k) noexcept;

/// Little-endian binary layout starting with the magic "PRCK" and a version.
std::string serialize(const KeyFile& key);
/// Throws KeyFormat on malformed input.
KeyFile deserialize(std::string_view bytes);

/// Throw Io on filesystem errors.
void save(const std::string& path, const KeyFile& key);
KeyFile load(const std::string& path);

}  // namespace prc::keyfile
