#include "dpis/core.hpp"

#include <stdexcept>

namespace dpis {

std::optional<Channel> channel_from_letter(char letter) {
  switch (letter) {
    case 'R': return Channel::R;
    case 'G': return Channel::G;
    case 'B': return Channel::B;
    default: return std::nullopt;
  }
}

std::uint8_t write_low_bits(std::uint8_t v, int k, std::uint32_t bits) {
  if (k < 1 || k > 8) throw std::invalid_argument("write_low_bits: k must be in 1..8");
  const std::uint32_t mask = (1U << k) - 1U;
  if (bits > mask) throw std::invalid_argument("write_low_bits: value does not fit in k bits");
  return static_cast<std::uint8_t>((v & ~mask) | bits);
}

std::uint8_t read_low_bits(std::uint8_t v, int k) {
  if (k < 1 || k > 8) throw std::invalid_argument("read_low_bits: k must be in 1..8");
  return static_cast<std::uint8_t>(v & ((1U << k) - 1U));
}

ImageBuffer::ImageBuffer(std::uint32_t width, std::uint32_t height)
    : ImageBuffer(width, height, std::vector<Pixel>(static_cast<std::size_t>(width) * height)) {}

ImageBuffer::ImageBuffer(std::uint32_t width, std::uint32_t height, std::vector<Pixel> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) throw std::invalid_argument("image dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("pixel count does not match width x height");
}

Pixel& ImageBuffer::at(std::uint32_t x, std::uint32_t y) {
  if (x >= width_ || y >= height_) throw std::out_of_range("pixel coordinate out of bounds");
  return pixels_[static_cast<std::size_t>(y) * width_ + x];
}

const Pixel& ImageBuffer::at(std::uint32_t x, std::uint32_t y) const {
  if (x >= width_ || y >= height_) throw std::out_of_range("pixel coordinate out of bounds");
  return pixels_[static_cast<std::size_t>(y) * width_ + x];
}

StegoKey::StegoKey(std::vector<Channel> indicators, std::uint8_t threshold)
    : indicators_(std::move(indicators)), threshold_(threshold) {
  if (indicators_.size() < kMinIndicatorLength)
    throw std::invalid_argument("indicator sequence must have length >= 3");
}

StegoKey StegoKey::from_string(std::string_view indicators, std::uint8_t threshold) {
  std::vector<Channel> seq;
  seq.reserve(indicators.size());
  for (char c : indicators) {
    auto ch = channel_from_letter(c);
    if (!ch) throw std::invalid_argument(std::string("indicator sequence contains '") + c + "'");
    seq.push_back(*ch);
  }
  return StegoKey(std::move(seq), threshold);
}

std::string StegoKey::sequence_string() const {
  std::string s;
  s.reserve(indicators_.size());
  for (Channel c : indicators_) s.push_back(channel_letter(c));
  return s;
}

bool is_skip_pixel(const Pixel& p, Channel indicator) {
  const auto ind = masked(p[indicator]);
  return ind < masked(p[succ(indicator)]) && ind < masked(p[pred(indicator)]);
}

PixelPlan plan_pixel(const Pixel& p, Channel indicator, std::uint8_t threshold) {
  if (is_skip_pixel(p, indicator)) return std::nullopt;

  const Channel after = succ(indicator);
  const Channel before = pred(indicator);
  // Lower of the two remaining channels carries data; ties go to succ.
  const bool use_before = masked(p[before]) < masked(p[after]);

  EmbedPlan plan{};
  plan.data_channel = use_before ? before : after;
  plan.flag_channel = use_before ? after : before;
  plan.indicator_lsb = use_before ? 1 : 0;
  plan.bit_count = masked(p[plan.data_channel]) < threshold ? 4 : 3;
  plan.flag_lsb = plan.bit_count == 4 ? 1 : 0;
  return plan;
}

std::optional<PixelSignal> read_pixel_signal(const Pixel& p, Channel indicator) {
  if (is_skip_pixel(p, indicator)) return std::nullopt;
  return decode_signal_lsbs(p, indicator);
}

PixelSignal decode_signal_lsbs(const Pixel& p, Channel indicator) {
  const bool use_before = lsb(p[indicator]) == 1;
  PixelSignal s{};
  s.data_channel = use_before ? pred(indicator) : succ(indicator);
  s.flag_channel = use_before ? succ(indicator) : pred(indicator);
  s.bit_count = lsb(p[s.flag_channel]) == 1 ? 4 : 3;
  return s;
}

void BitCursor::seek(std::size_t pos) {
  if (pos > size_bits()) throw std::out_of_range("BitCursor::seek past end");
  pos_ = pos;
}

std::uint32_t BitCursor::read(int k) {
  if (k < 0 || k > 32) throw std::invalid_argument("BitCursor::read: k must be in 0..32");
  if (remaining() < static_cast<std::size_t>(k)) throw std::out_of_range("BitCursor::read past end");
  return read_padded(k);
}

std::uint32_t BitCursor::read_padded(int k) {
  if (k < 0 || k > 32) throw std::invalid_argument("BitCursor::read_padded: k must be in 0..32");
  std::uint32_t value = 0;
  for (int i = 0; i < k; ++i, ++pos_) {
    std::uint32_t bit = 0;
    if (pos_ < size_bits()) bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1U;
    value = (value << 1) | bit;
  }
  return value;
}

void BitCursor::write(int k, std::uint32_t value) {
  if (k < 0 || k > 32) throw std::invalid_argument("BitCursor::write: k must be in 0..32");
  for (int i = k - 1; i >= 0; --i, ++pos_) {
    if (pos_ / 8 >= bytes_.size()) bytes_.resize(pos_ / 8 + 1, 0);
    const auto shift = 7 - pos_ % 8;
    const auto bit = static_cast<std::uint8_t>((value >> i) & 1U);
    bytes_[pos_ / 8] = static_cast<std::uint8_t>((bytes_[pos_ / 8] & ~(1U << shift)) | (bit << shift));
  }
}

}  // namespace dpis
