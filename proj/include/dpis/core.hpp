#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpis {

using Bytes = std::vector<std::uint8_t>;

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

enum class Channel : std::uint8_t { R = 0, G = 1, B = 2 };

inline constexpr std::array<Channel, 3> kChannels = {Channel::R, Channel::G, Channel::B};

// Cyclic step in R -> G -> B -> R order. direction is +1 or -1.
constexpr Channel channel_offset(Channel c, int direction) {
  const int idx = (static_cast<int>(c) + (direction >= 0 ? 1 : 2)) % 3;
  return static_cast<Channel>(idx);
}

constexpr Channel succ(Channel c) { return channel_offset(c, +1); }
constexpr Channel pred(Channel c) { return channel_offset(c, -1); }

constexpr char channel_letter(Channel c) { return "RGB"[static_cast<int>(c)]; }
std::optional<Channel> channel_from_letter(char letter);

// ---------------------------------------------------------------------------
// Bit helpers on 8-bit intensities
// ---------------------------------------------------------------------------

// High nibble only. Embedding never touches these bits, so every decision
// taken on masked values replays identically at extraction.
constexpr std::uint8_t masked(std::uint8_t v) { return static_cast<std::uint8_t>(v & 0xF0); }

constexpr std::uint8_t lsb(std::uint8_t v) { return static_cast<std::uint8_t>(v & 1U); }

constexpr std::uint8_t set_lsb(std::uint8_t v, std::uint8_t bit) {
  return static_cast<std::uint8_t>((v & 0xFE) | (bit & 1U));
}

// Replace the low k bits of v (1 <= k <= 8). Throws std::invalid_argument if
// bits does not fit in k bits.
std::uint8_t write_low_bits(std::uint8_t v, int k, std::uint32_t bits);
std::uint8_t read_low_bits(std::uint8_t v, int k);

// ---------------------------------------------------------------------------
// Pixels and images
// ---------------------------------------------------------------------------

struct Pixel {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::uint8_t& operator[](Channel c) {
    switch (c) {
      case Channel::R: return r;
      case Channel::G: return g;
      case Channel::B: break;
    }
    return b;
  }
  std::uint8_t operator[](Channel c) const {
    switch (c) {
      case Channel::R: return r;
      case Channel::G: return g;
      case Channel::B: break;
    }
    return b;
  }

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct Position {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position& a, const Position& b) {
    if (a.y != b.y) return a.y <=> b.y;
    return a.x <=> b.x;
  }
};

// Row-major RGB raster. Pixel (x, y) lives at index y * width + x, and every
// scheme in this library walks pixels in that index order.
class ImageBuffer {
 public:
  ImageBuffer(std::uint32_t width, std::uint32_t height);
  ImageBuffer(std::uint32_t width, std::uint32_t height, std::vector<Pixel> pixels);

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  Pixel& operator[](std::size_t index) { return pixels_[index]; }
  const Pixel& operator[](std::size_t index) const { return pixels_[index]; }

  Pixel& at(std::uint32_t x, std::uint32_t y);
  const Pixel& at(std::uint32_t x, std::uint32_t y) const;

  Position position_of(std::size_t index) const {
    return {static_cast<std::uint32_t>(index % width_), static_cast<std::uint32_t>(index / width_)};
  }
  bool contains(Position p) const noexcept { return p.x < width_ && p.y < height_; }

  std::span<Pixel> pixels() noexcept { return pixels_; }
  std::span<const Pixel> pixels() const noexcept { return pixels_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<Pixel> pixels_;
};

// ---------------------------------------------------------------------------
// Key
// ---------------------------------------------------------------------------

inline constexpr std::uint8_t kDefaultThreshold = 128;
inline constexpr std::size_t kMinIndicatorLength = 3;

// The shared secret: the indicator sequence, consumed cyclically one entry per
// pixel, plus the threshold that picks 4-bit over 3-bit payload chunks.
class StegoKey {
 public:
  static constexpr int kVersion = 1;

  explicit StegoKey(std::vector<Channel> indicators, std::uint8_t threshold = kDefaultThreshold);

  // Parses a string over {R,G,B}; throws std::invalid_argument on bad input.
  static StegoKey from_string(std::string_view indicators, std::uint8_t threshold = kDefaultThreshold);

  const std::vector<Channel>& indicators() const noexcept { return indicators_; }
  std::size_t length() const noexcept { return indicators_.size(); }
  std::uint8_t threshold() const noexcept { return threshold_; }
  int version() const noexcept { return kVersion; }

  Channel indicator_for(std::size_t pixel_index) const {
    return indicators_[pixel_index % indicators_.size()];
  }

  std::string sequence_string() const;

  friend bool operator==(const StegoKey&, const StegoKey&) = default;

 private:
  std::vector<Channel> indicators_;
  std::uint8_t threshold_;
};

// ---------------------------------------------------------------------------
// Per-pixel rules
// ---------------------------------------------------------------------------

struct EmbedPlan {
  Channel data_channel;
  Channel flag_channel;
  std::uint8_t bit_count;      // 3 or 4
  std::uint8_t indicator_lsb;  // 0: data = succ(indicator), 1: data = pred(indicator)
  std::uint8_t flag_lsb;       // 0: 3 bits, 1: 4 bits

  friend bool operator==(const EmbedPlan&, const EmbedPlan&) = default;
};

// nullopt means the pixel is skipped.
using PixelPlan = std::optional<EmbedPlan>;

// True when the indicator's masked value is strictly below both others.
bool is_skip_pixel(const Pixel& p, Channel indicator);

// Embedding decision for one cover pixel. Reads masked values only.
PixelPlan plan_pixel(const Pixel& p, Channel indicator, std::uint8_t threshold = kDefaultThreshold);

// What extraction recovers from a stego pixel: the skip test on masked values,
// then channel identities and bit count from the two signaling LSBs.
struct PixelSignal {
  Channel data_channel;
  Channel flag_channel;
  std::uint8_t bit_count;
};
std::optional<PixelSignal> read_pixel_signal(const Pixel& p, Channel indicator);

// Signal decoding without the skip test.
PixelSignal decode_signal_lsbs(const Pixel& p, Channel indicator);

// ---------------------------------------------------------------------------
// BitCursor
// ---------------------------------------------------------------------------

// MSB-first bit cursor over a byte buffer. Writes past the end grow the buffer.
class BitCursor {
 public:
  BitCursor() = default;
  explicit BitCursor(Bytes bytes) : bytes_(std::move(bytes)) {}

  std::size_t position() const noexcept { return pos_; }
  std::size_t size_bits() const noexcept { return bytes_.size() * 8; }
  std::size_t remaining() const noexcept { return pos_ < size_bits() ? size_bits() - pos_ : 0; }

  // Throws std::out_of_range when pos is beyond the end.
  void seek(std::size_t pos);

  // Next k bits (k <= 32), first bit most significant. Throws std::out_of_range
  // if fewer than k bits remain.
  std::uint32_t read(int k);

  // Like read() but bits past the end are zero. Advances by k regardless.
  std::uint32_t read_padded(int k);

  void write(int k, std::uint32_t value);

  const Bytes& bytes() const noexcept { return bytes_; }

 private:
  Bytes bytes_;
  std::size_t pos_ = 0;
};

}  // namespace dpis
