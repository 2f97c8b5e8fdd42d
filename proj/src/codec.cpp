#include "dpis/codec.hpp"

#include <limits>
#include <string>

#include "dpis/errors.hpp"
#include "dpis/keyspace.hpp"
#include "dpis/random.hpp"

namespace dpis {

Bytes build_payload(std::span<const std::uint8_t> message) {
  if (message.size() > std::numeric_limits<std::uint32_t>::max())
    throw CapacityError("message longer than 2^32 - 1 bytes");
  const auto len = static_cast<std::uint32_t>(message.size());
  Bytes payload;
  payload.reserve(message.size() + 4);
  payload.push_back(static_cast<std::uint8_t>(len >> 24));
  payload.push_back(static_cast<std::uint8_t>(len >> 16));
  payload.push_back(static_cast<std::uint8_t>(len >> 8));
  payload.push_back(static_cast<std::uint8_t>(len));
  payload.insert(payload.end(), message.begin(), message.end());
  return payload;
}

StegoKey keygen(std::size_t length, std::uint64_t seed, std::uint8_t threshold) {
  Rng rng(seed);
  return StegoKey(random_pattern(length, rng), threshold);
}

std::vector<ScheduledPixel> schedule(const ImageBuffer& image, const StegoKey& key) {
  std::vector<ScheduledPixel> out;
  out.reserve(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const Channel ind = key.indicator_for(i);
    out.push_back({i, ind, plan_pixel(image[i], ind, key.threshold())});
  }
  return out;
}

CapacityReport capacity_scan(const ImageBuffer& image, const StegoKey& key) {
  CapacityReport report;
  report.total_pixels = image.size();
  for (std::size_t i = 0; i < image.size(); ++i) {
    const auto plan = plan_pixel(image[i], key.indicator_for(i), key.threshold());
    if (!plan) {
      ++report.skipped_pixels;
      continue;
    }
    ++report.utilized_pixels;
    report.capacity_bits += plan->bit_count;
  }
  return report;
}

EmbedResult embed(const ImageBuffer& cover, const StegoKey& key, std::span<const std::uint8_t> message) {
  const std::uint64_t needed = kHeaderBits + 8ULL * message.size();
  const CapacityReport scan = capacity_scan(cover, key);
  if (needed > scan.capacity_bits) {
    throw CapacityError("message needs " + std::to_string(needed) + " bits, image holds " +
                        std::to_string(scan.capacity_bits));
  }

  BitCursor payload(build_payload(message));
  EmbedResult result{cover, {}, {}};
  result.report.total_pixels = cover.size();
  result.report.capacity_bits = scan.capacity_bits;
  result.report.used_bits = needed;

  for (std::size_t i = 0; i < cover.size() && payload.position() < needed; ++i) {
    const Channel ind = key.indicator_for(i);
    const auto plan = plan_pixel(cover[i], ind, key.threshold());
    if (!plan) {
      result.skipped_positions.push_back(cover.position_of(i));
      ++result.report.skipped_pixels;
      continue;
    }
    Pixel& px = result.stego[i];
    px[ind] = set_lsb(px[ind], plan->indicator_lsb);
    px[plan->flag_channel] = set_lsb(px[plan->flag_channel], plan->flag_lsb);
    const auto chunk = payload.read_padded(plan->bit_count);
    px[plan->data_channel] = write_low_bits(px[plan->data_channel], plan->bit_count, chunk);

    ++result.report.utilized_pixels;
    result.report.carried_bits += plan->bit_count;
  }
  return result;
}

Bytes extract(const ImageBuffer& stego, const StegoKey& key) {
  PayloadReader reader(stego, key);
  const auto header = reader.take(static_cast<int>(kHeaderBits));
  if (!header) throw MalformedPayload("image too small to hold a length header");

  const std::uint64_t wanted_bits = 8ULL * *header;
  if (wanted_bits > reader.max_remaining_bits()) {
    throw MalformedPayload("header claims " + std::to_string(*header) + " bytes, more than the image can carry");
  }
  Bytes message = reader.take_bytes(*header);
  if (message.size() != *header) {
    throw MalformedPayload("payload ended after " + std::to_string(message.size()) + " of " +
                           std::to_string(*header) + " bytes");
  }
  return message;
}

PayloadReader::PayloadReader(const ImageBuffer& image, const StegoKey& key, ReadPolicy policy)
    : image_(image), key_(key), policy_(policy) {
  if (policy_.fixed_bit_count < 0 || policy_.fixed_bit_count > 4)
    throw std::invalid_argument("fixed bit count must be in 1..4 (or 0 for flag-driven)");
}

bool PayloadReader::refill() {
  while (next_pixel_ < image_.size()) {
    const std::size_t i = next_pixel_++;
    const Pixel& px = image_[i];
    const Channel ind = key_.indicator_for(i);
    if (policy_.honor_skip && is_skip_pixel(px, ind)) continue;

    const PixelSignal signal = decode_signal_lsbs(px, ind);
    const int bits = policy_.fixed_bit_count != 0 ? policy_.fixed_bit_count : signal.bit_count;
    buffer_ = (buffer_ << bits) | read_low_bits(px[signal.data_channel], bits);
    buffered_ += bits;
    return true;
  }
  return false;
}

std::optional<std::uint32_t> PayloadReader::take(int k) {
  if (k < 0 || k > 32) throw std::invalid_argument("PayloadReader::take: k must be in 0..32");
  while (buffered_ < k) {
    if (!refill()) return std::nullopt;
  }
  buffered_ -= k;
  const auto value = static_cast<std::uint32_t>((buffer_ >> buffered_) & ((1ULL << k) - 1ULL));
  buffer_ &= (1ULL << buffered_) - 1ULL;
  return value;
}

Bytes PayloadReader::take_bytes(std::size_t n) {
  Bytes out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto byte = take(8);
    if (!byte) break;
    out.push_back(static_cast<std::uint8_t>(*byte));
  }
  return out;
}

std::uint64_t PayloadReader::max_remaining_bits() const {
  return static_cast<std::uint64_t>(buffered_) + 4ULL * (image_.size() - next_pixel_);
}

}  // namespace dpis
