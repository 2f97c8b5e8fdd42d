#include "dpis/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>
#include <vector>

#include "dpis/errors.hpp"

namespace dpis {
namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

bool starts_with(std::span<const std::uint8_t> bytes, std::string_view prefix) {
  return bytes.size() >= prefix.size() && std::memcmp(bytes.data(), prefix.data(), prefix.size()) == 0;
}

// libpng reports errors through longjmp. Everything that changes after
// setjmp lives in this heap block, so its state is well defined afterwards.
struct PngState {
  std::span<const std::uint8_t> input;
  std::size_t offset = 0;
  Bytes output;
  Bytes raster;
  std::vector<png_bytep> rows;
  std::string error;
  std::string unsupported;
};

void png_fail(png_structp png, png_const_charp msg) {
  static_cast<PngState*>(png_get_error_ptr(png))->error = msg;
  png_longjmp(png, 1);
}

void png_quiet(png_structp, png_const_charp) {}

void png_read_mem(png_structp png, png_bytep out, png_size_t n) {
  auto* st = static_cast<PngState*>(png_get_io_ptr(png));
  if (st->input.size() - st->offset < n) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, st->input.data() + st->offset, n);
  st->offset += n;
}

void png_write_mem(png_structp png, png_bytep data, png_size_t n) {
  auto* st = static_cast<PngState*>(png_get_io_ptr(png));
  st->output.insert(st->output.end(), data, data + n);
}

void png_flush_mem(png_structp) {}

const char* describe_color_type(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: return "grayscale";
    case PNG_COLOR_TYPE_GRAY_ALPHA: return "grayscale with alpha";
    case PNG_COLOR_TYPE_PALETTE: return "palette";
    case PNG_COLOR_TYPE_RGB_ALPHA: return "RGB with alpha";
    default: return "unknown color type";
  }
}

// PPM header token reader; skips whitespace and '#' comments.
class PnmHeader {
 public:
  explicit PnmHeader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t number() {
    skip_space();
    std::uint64_t v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (++digits > 9) throw CorruptFile("PPM header number too large");
    }
    if (digits == 0) throw CorruptFile("PPM header is malformed");
    return v;
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) throw CorruptFile("PPM header is malformed");
    return pos_ + 1;
  }

  void seek(std::size_t pos) { pos_ = pos; }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// ---- text format helpers ----

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    if (nl == std::string_view::npos) {
      lines.push_back(text);
      break;
    }
    lines.push_back(text.substr(0, nl));
    text.remove_prefix(nl + 1);
  }
  return lines;
}

template <typename T>
T parse_number(std::string_view s, std::uint64_t max, std::size_t line, std::string_view what) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, std::string(what) + " '" + std::string(s) + "' is not a decimal number");
  }
  if (v > max) throw ParseError(line, std::string(what) + " " + std::string(s) + " is out of range");
  return static_cast<T>(v);
}

std::string_view value_after(std::string_view line, std::string_view key, std::size_t line_no) {
  if (line.substr(0, key.size()) != key || line.size() <= key.size() || line[key.size()] != '=')
    throw ParseError(line_no, "expected '" + std::string(key) + "=...'");
  return line.substr(key.size() + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Images
// ---------------------------------------------------------------------------

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
  auto st = std::make_unique<PngState>();
  st->input = bytes;

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, st.get(), png_fail, png_quiet);
  if (!png) throw CorruptFile("libpng could not allocate a reader");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw CorruptFile("libpng could not allocate a reader");
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw CorruptFile("corrupt PNG: " + st->error);
  }

  png_set_read_fn(png, st.get(), png_read_mem);
  png_read_info(png, info);

  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  int interlace = 0;
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, &interlace, nullptr, nullptr);

  if (color_type != PNG_COLOR_TYPE_RGB) {
    st->unsupported = std::string("PNG is ") + describe_color_type(color_type) + ", need 8-bit RGB";
  } else if (bit_depth != 8) {
    st->unsupported = "PNG has " + std::to_string(bit_depth) + "-bit channels, need 8-bit RGB";
  }
  if (!st->unsupported.empty()) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw UnsupportedFormat(st->unsupported);
  }

  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  st->raster.resize(stride * height);
  st->rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) st->rows[y] = st->raster.data() + y * stride;
  png_read_image(png, st->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<Pixel> pixels(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const std::size_t y = i / width;
    const std::size_t x = i % width;
    const std::uint8_t* src = st->raster.data() + y * stride + x * 3;
    pixels[i] = {src[0], src[1], src[2]};
  }
  return ImageBuffer(width, height, std::move(pixels));
}

Bytes encode_png(const ImageBuffer& image) {
  auto st = std::make_unique<PngState>();
  const std::size_t stride = static_cast<std::size_t>(image.width()) * 3;
  st->raster.resize(stride * image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    st->raster[i * 3] = image[i].r;
    st->raster[i * 3 + 1] = image[i].g;
    st->raster[i * 3 + 2] = image[i].b;
  }
  st->rows.resize(image.height());
  for (std::uint32_t y = 0; y < image.height(); ++y) st->rows[y] = st->raster.data() + y * stride;

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, st.get(), png_fail, png_quiet);
  if (!png) throw IoError("libpng could not allocate a writer");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng could not allocate a writer");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed: " + st->error);
  }

  png_set_write_fn(png, st.get(), png_write_mem, png_flush_mem);
  png_set_IHDR(png, info, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, st->rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return std::move(st->output);
}

ImageBuffer decode_ppm(std::span<const std::uint8_t> bytes) {
  if (!starts_with(bytes, "P6")) throw UnsupportedFormat("only binary RGB PPM (P6) is supported");
  PnmHeader header(bytes);
  header.seek(2);
  const auto width = header.number();
  const auto height = header.number();
  const auto maxval = header.number();
  if (width == 0 || height == 0) throw CorruptFile("PPM has zero width or height");
  if (maxval != 255) throw UnsupportedFormat("PPM maxval " + std::to_string(maxval) + ", need 255 (8-bit)");
  const std::size_t offset = header.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - offset < count * 3) throw CorruptFile("PPM raster is truncated");

  std::vector<Pixel> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto* src = bytes.data() + offset + i * 3;
    pixels[i] = {src[0], src[1], src[2]};
  }
  return ImageBuffer(static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height), std::move(pixels));
}

Bytes encode_ppm(const ImageBuffer& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.reserve(out.size() + image.size() * 3);
  for (const Pixel& p : image.pixels()) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

ImageBuffer decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw CorruptFile("empty image file");
  if (bytes.size() >= kPngSignature.size() && std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin()))
    return decode_png(bytes);
  if (starts_with(bytes, "P6")) return decode_ppm(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '5')
    throw UnsupportedFormat("only binary RGB PPM (P6) is supported, not P" + std::string(1, char(bytes[1])));
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF)
    throw UnsupportedFormat("JPEG is lossy; the payload would not survive it");
  if (starts_with(bytes, "RIFF") && bytes.size() >= 12 && std::memcmp(bytes.data() + 8, "WEBP", 4) == 0)
    throw UnsupportedFormat("WebP is not supported");
  if (starts_with(bytes, "GIF8")) throw UnsupportedFormat("GIF is palette-based");
  if (starts_with(bytes, "BM")) throw UnsupportedFormat("BMP is not supported; convert to PNG");
  throw UnsupportedFormat("unrecognized image format");
}

ImageBuffer load_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

void save_image(const ImageBuffer& image, const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return write_file(path, encode_png(image));
  if (ext == ".ppm") return write_file(path, encode_ppm(image));
  if (ext == ".jpg" || ext == ".jpeg" || ext == ".webp")
    throw UnsupportedFormat("refusing to write a lossy format (" + ext + ")");
  throw UnsupportedFormat("unknown output extension '" + ext + "', use .png or .ppm");
}

// ---------------------------------------------------------------------------
// Key file
// ---------------------------------------------------------------------------

std::string serialize_key(const StegoKey& key) {
  std::ostringstream os;
  os << kKeyMagic << '\n' << "indicator=" << key.sequence_string() << '\n'
     << "threshold=" << static_cast<int>(key.threshold()) << '\n';
  return os.str();
}

StegoKey parse_key(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kKeyMagic) throw ParseError(1, "expected '" + std::string(kKeyMagic) + "'");

  std::optional<std::vector<Channel>> indicators;
  std::optional<std::uint8_t> threshold;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = lines[i];
    const auto eq = line.find('=');
    const auto name = line.substr(0, eq);
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value, got '" + std::string(line) + "'");
    const auto value = line.substr(eq + 1);

    if (name == "indicator") {
      if (indicators) throw ParseError(line_no, "duplicate indicator line");
      std::vector<Channel> seq;
      for (char c : value) {
        const auto ch = channel_from_letter(c);
        if (!ch) throw ParseError(line_no, std::string("indicator contains '") + c + "', allowed: R G B");
        seq.push_back(*ch);
      }
      if (seq.size() < kMinIndicatorLength) throw ParseError(line_no, "indicator must be at least 3 channels long");
      indicators = std::move(seq);
    } else if (name == "threshold") {
      if (threshold) throw ParseError(line_no, "duplicate threshold line");
      threshold = parse_number<std::uint8_t>(value, 255, line_no, "threshold");
    } else {
      throw ParseError(line_no, "unknown field '" + std::string(name) + "'");
    }
  }
  if (!indicators) throw ParseError(lines.size() + 1, "missing indicator line");
  if (!threshold) throw ParseError(lines.size() + 1, "missing threshold line");
  return StegoKey(std::move(*indicators), *threshold);
}

// ---------------------------------------------------------------------------
// Manifest file
// ---------------------------------------------------------------------------

std::string serialize_manifest(const IntegrityManifest& manifest) {
  std::ostringstream os;
  os << kManifestMagic << '\n'
     << "dims=" << manifest.width << 'x' << manifest.height << '\n'
     << "count=" << manifest.entries.size() << '\n';
  for (const auto& e : manifest.entries) {
    os << e.position.x << ' ' << e.position.y << ' ' << int(e.value.r) << ' ' << int(e.value.g) << ' '
       << int(e.value.b) << '\n';
  }
  return os.str();
}

IntegrityManifest parse_manifest(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kManifestMagic)
    throw ParseError(1, "expected '" + std::string(kManifestMagic) + "'");
  if (lines.size() < 2) throw ParseError(2, "missing dims line");
  if (lines.size() < 3) throw ParseError(3, "missing count line");

  IntegrityManifest m;
  const auto dims = value_after(lines[1], "dims", 2);
  const auto x = dims.find('x');
  if (x == std::string_view::npos) throw ParseError(2, "dims must be <width>x<height>");
  m.width = parse_number<std::uint32_t>(dims.substr(0, x), 0xFFFFFFFFULL, 2, "width");
  m.height = parse_number<std::uint32_t>(dims.substr(x + 1), 0xFFFFFFFFULL, 2, "height");
  if (m.width == 0 || m.height == 0) throw ParseError(2, "dims must be positive");

  const auto count = parse_number<std::size_t>(value_after(lines[2], "count", 3), 0xFFFFFFFFULL, 3, "count");
  if (lines.size() - 3 != count) {
    throw ParseError(std::min(lines.size(), count + 3) + 1,
                     "count=" + std::to_string(count) + " but " + std::to_string(lines.size() - 3) + " entry lines");
  }

  std::set<Position> seen;
  m.entries.reserve(count);
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::array<std::string_view, 5> fields;
    std::string_view rest = lines[i];
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const auto sp = rest.find(' ');
      if ((sp == std::string_view::npos) != (f == fields.size() - 1))
        throw ParseError(line_no, "expected '<x> <y> <r> <g> <b>'");
      fields[f] = rest.substr(0, sp);
      if (sp != std::string_view::npos) rest.remove_prefix(sp + 1);
    }
    ManifestEntry e;
    e.position.x = parse_number<std::uint32_t>(fields[0], m.width - 1ULL, line_no, "x");
    e.position.y = parse_number<std::uint32_t>(fields[1], m.height - 1ULL, line_no, "y");
    e.value.r = parse_number<std::uint8_t>(fields[2], 255, line_no, "r");
    e.value.g = parse_number<std::uint8_t>(fields[3], 255, line_no, "g");
    e.value.b = parse_number<std::uint8_t>(fields[4], 255, line_no, "b");
    if (!seen.insert(e.position).second) throw ParseError(line_no, "duplicate position");
    m.entries.push_back(e);
  }
  return m;
}

}  // namespace dpis
