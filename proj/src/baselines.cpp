#include "dpis/baselines.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "dpis/errors.hpp"

namespace dpis {
namespace {

struct Slot {
  Channel channel;
  int bits;
};

struct SlotList {
  std::array<Slot, 2> slots{};
  int count = 0;

  void add(Channel c, int bits) { slots[count++] = {c, bits}; }
  int total_bits() const {
    int t = 0;
    for (int i = 0; i < count; ++i) t += slots[i].bits;
    return t;
  }
};

Channel rotating_indicator(std::size_t index) { return static_cast<Channel>(index % 3); }

SlotList pi_slots(const Pixel& p, std::size_t index) {
  const Channel ind = rotating_indicator(index);
  const Channel ch1 = succ(ind);
  const Channel ch2 = succ(ch1);
  SlotList s;
  switch (p[ind] & 0x3) {
    case 0b01: s.add(ch2, 2); break;
    case 0b10: s.add(ch1, 2); break;
    case 0b11:
      s.add(ch1, 2);
      s.add(ch2, 2);
      break;
    default: break;
  }
  return s;
}

template <typename Planner>
CapacityReport scan_slots(const ImageBuffer& image, Planner planner) {
  CapacityReport report;
  report.total_pixels = image.size();
  for (std::size_t i = 0; i < image.size(); ++i) {
    const int bits = planner(image[i], i).total_bits();
    if (bits == 0) {
      ++report.skipped_pixels;
    } else {
      ++report.utilized_pixels;
      report.capacity_bits += static_cast<std::uint64_t>(bits);
    }
  }
  return report;
}

template <typename Planner>
BaselineResult embed_slots(const ImageBuffer& cover, std::span<const std::uint8_t> message, Planner planner) {
  const std::uint64_t needed = kHeaderBits + 8ULL * message.size();
  const CapacityReport scan = scan_slots(cover, planner);
  if (needed > scan.capacity_bits) {
    throw CapacityError("message needs " + std::to_string(needed) + " bits, image holds " +
                        std::to_string(scan.capacity_bits));
  }

  BitCursor payload(build_payload(message));
  BaselineResult result{cover, {}};
  result.report.total_pixels = cover.size();
  result.report.capacity_bits = scan.capacity_bits;
  result.report.used_bits = needed;

  for (std::size_t i = 0; i < cover.size() && payload.position() < needed; ++i) {
    const SlotList slots = planner(cover[i], i);
    if (slots.count == 0) {
      ++result.report.skipped_pixels;
      continue;
    }
    Pixel& px = result.stego[i];
    int written = 0;
    for (int s = 0; s < slots.count && payload.position() < needed; ++s) {
      const auto& slot = slots.slots[s];
      px[slot.channel] = write_low_bits(px[slot.channel], slot.bits, payload.read_padded(slot.bits));
      written += slot.bits;
    }
    ++result.report.utilized_pixels;
    result.report.carried_bits += static_cast<std::uint64_t>(written);
  }
  return result;
}

template <typename Planner>
Bytes extract_slots(const ImageBuffer& stego, Planner planner) {
  // Bits are pulled lazily so a bogus header cannot force a full-image read.
  std::size_t next = 0;
  std::uint64_t buffer = 0;
  int buffered = 0;
  auto take = [&](int k) -> std::optional<std::uint32_t> {
    while (buffered < k) {
      if (next >= stego.size()) return std::nullopt;
      const Pixel& px = stego[next];
      const SlotList slots = planner(px, next);
      ++next;
      for (int s = 0; s < slots.count; ++s) {
        buffer = (buffer << slots.slots[s].bits) | read_low_bits(px[slots.slots[s].channel], slots.slots[s].bits);
        buffered += slots.slots[s].bits;
      }
    }
    buffered -= k;
    const auto v = static_cast<std::uint32_t>((buffer >> buffered) & ((1ULL << k) - 1ULL));
    buffer &= (1ULL << buffered) - 1ULL;
    return v;
  };

  const auto header = take(static_cast<int>(kHeaderBits));
  if (!header) throw MalformedPayload("image too small to hold a length header");
  // 8 bits per pixel is the most either baseline can carry.
  if (8ULL * *header > static_cast<std::uint64_t>(buffered) + 8ULL * (stego.size() - next))
    throw MalformedPayload("header claims " + std::to_string(*header) + " bytes, more than the image can carry");

  Bytes out;
  out.reserve(*header);
  for (std::uint32_t i = 0; i < *header; ++i) {
    const auto byte = take(8);
    if (!byte) throw MalformedPayload("payload ended after " + std::to_string(i) + " bytes");
    out.push_back(static_cast<std::uint8_t>(*byte));
  }
  return out;
}

auto ivb_planner(const PartitionSchema& schema) {
  return [&schema](const Pixel& p, std::size_t index) {
    const Channel ch1 = succ(rotating_indicator(index));
    const Channel ch2 = succ(ch1);
    SlotList s;
    s.add(ch1, schema.bits_for(p[ch1]));
    s.add(ch2, schema.bits_for(p[ch2]));
    return s;
  };
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(text) + "' in partition schema");
  return value;
}

}  // namespace

CapacityReport pi_capacity(const ImageBuffer& image) { return scan_slots(image, pi_slots); }

BaselineResult pi_embed(const ImageBuffer& cover, std::span<const std::uint8_t> message) {
  return embed_slots(cover, message, pi_slots);
}

Bytes pi_extract(const ImageBuffer& stego) { return extract_slots(stego, pi_slots); }

PartitionSchema::PartitionSchema(std::vector<PartitionRange> ranges) : ranges_(std::move(ranges)) {
  if (ranges_.empty()) throw std::invalid_argument("partition schema needs at least one range");
  std::sort(ranges_.begin(), ranges_.end(), [](const auto& a, const auto& b) { return a.low < b.low; });

  int expected_low = 0;
  int previous_bits = 8;
  for (const auto& r : ranges_) {
    if (r.high < r.low) throw std::invalid_argument("partition range has high < low");
    if (r.bits < 1 || r.bits > 4) throw std::invalid_argument("partition range bits must be in 1..4");
    if (r.low < expected_low) throw std::invalid_argument("partition ranges overlap");
    if (r.low > expected_low) throw std::invalid_argument("partition ranges leave a gap");
    if (r.bits > previous_bits)
      throw std::invalid_argument("higher intensity ranges may not carry more bits");
    expected_low = r.high + 1;
    previous_bits = r.bits;
    max_bits_ = std::max(max_bits_, r.bits);
  }
  if (expected_low != 256) throw std::invalid_argument("partition ranges must cover 0..255");
}

PartitionSchema PartitionSchema::default_schema() {
  return PartitionSchema({{0, 63, 4}, {64, 127, 3}, {128, 255, 2}});
}

PartitionSchema PartitionSchema::parse(std::string_view text) {
  std::vector<PartitionRange> ranges;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);

    const auto dash = item.find('-');
    const auto colon = item.find(':');
    if (dash == std::string_view::npos || colon == std::string_view::npos || colon < dash)
      throw std::invalid_argument("partition range '" + std::string(item) + "' is not low-high:bits");
    const int low = parse_int(item.substr(0, dash), "low bound");
    const int high = parse_int(item.substr(dash + 1, colon - dash - 1), "high bound");
    const int bits = parse_int(item.substr(colon + 1), "bit count");
    if (low < 0 || low > 255 || high < 0 || high > 255)
      throw std::invalid_argument("partition bounds must be within 0..255");
    ranges.push_back({static_cast<std::uint8_t>(low), static_cast<std::uint8_t>(high), bits});
  }
  return PartitionSchema(std::move(ranges));
}

std::string PartitionSchema::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    if (i) os << ',';
    os << int(ranges_[i].low) << '-' << int(ranges_[i].high) << ':' << ranges_[i].bits;
  }
  return os.str();
}

int PartitionSchema::bits_for(std::uint8_t value) const {
  const auto key = static_cast<std::uint8_t>(value & ~((1U << max_bits_) - 1U));
  for (const auto& r : ranges_) {
    if (key >= r.low && key <= r.high) return r.bits;
  }
  return ranges_.back().bits;  // unreachable: ranges cover 0..255
}

CapacityReport ivb_capacity(const ImageBuffer& image, const PartitionSchema& schema) {
  return scan_slots(image, ivb_planner(schema));
}

BaselineResult ivb_embed(const ImageBuffer& cover, const PartitionSchema& schema,
                         std::span<const std::uint8_t> message) {
  return embed_slots(cover, message, ivb_planner(schema));
}

Bytes ivb_extract(const ImageBuffer& stego, const PartitionSchema& schema) {
  return extract_slots(stego, ivb_planner(schema));
}

}  // namespace dpis
