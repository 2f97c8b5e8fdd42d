#include <doctest.h>

#include <png.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dpis/codec.hpp"
#include "dpis/errors.hpp"
#include "dpis/io.hpp"
#include "dpis/keyspace.hpp"
#include "support/synthetic.hpp"

using namespace dpis;
using dpis::testing::random_image;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "dpis_test_io";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Writes a PNG of an arbitrary color type with libpng directly.
void write_raw_png(const fs::path& path, int color_type, int bit_depth, int channels) {
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  REQUIRE(fp);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  const png_uint_32 w = 4, h = 4;
  png_set_IHDR(png, info, w, h, bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_color palette[4] = {{0, 0, 0}, {85, 85, 85}, {170, 170, 170}, {255, 255, 255}};
    png_set_PLTE(png, info, palette, 4);
  }
  png_write_info(png, info);
  std::vector<png_byte> row(w * channels * (bit_depth / 8 ? bit_depth / 8 : 1), 1);
  for (png_uint_32 y = 0; y < h; ++y) png_write_row(png, row.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("PNG and PPM round trips are pixel-exact") {
  Rng rng(64);
  const auto dir = scratch_dir();
  for (int t = 0; t < 5; ++t) {
    const auto img = random_image(1 + rng.below(80), 1 + rng.below(80), rng);
    save_image(img, dir / "rt.png");
    CHECK(load_image(dir / "rt.png") == img);
    save_image(img, dir / "rt.ppm");
    CHECK(load_image(dir / "rt.ppm") == img);
    CHECK(decode_png(encode_png(img)) == img);
    CHECK(encode_png(img) == encode_png(img));
  }
  const auto big = random_image(64, 64, rng);
  save_image(big, dir / "big.PNG");
  CHECK(load_image(dir / "big.PNG") == big);
}

TEST_CASE("unsupported and corrupt images are rejected") {
  const auto dir = scratch_dir();

  // JPEG signature (SOI + APP0/JFIF)
  const Bytes jpeg = {0xFF, 0xD8, 0xFF, 0xE0, 0x00, 0x10, 'J', 'F', 'I', 'F', 0x00};
  write_file(dir / "photo.jpg", jpeg);
  CHECK_THROWS_AS(load_image(dir / "photo.jpg"), UnsupportedFormat);

  write_raw_png(dir / "palette.png", PNG_COLOR_TYPE_PALETTE, 8, 1);
  CHECK_THROWS_AS(load_image(dir / "palette.png"), UnsupportedFormat);
  write_raw_png(dir / "gray.png", PNG_COLOR_TYPE_GRAY, 8, 1);
  CHECK_THROWS_AS(load_image(dir / "gray.png"), UnsupportedFormat);
  write_raw_png(dir / "rgba.png", PNG_COLOR_TYPE_RGB_ALPHA, 8, 4);
  CHECK_THROWS_AS(load_image(dir / "rgba.png"), UnsupportedFormat);
  write_raw_png(dir / "deep.png", PNG_COLOR_TYPE_RGB, 16, 3);
  CHECK_THROWS_AS(load_image(dir / "deep.png"), UnsupportedFormat);

  const std::string pgm = "P5\n2 2\n255\n\x01\x02\x03\x04";
  write_text_file(dir / "gray.pgm", pgm);
  CHECK_THROWS_AS(load_image(dir / "gray.pgm"), UnsupportedFormat);

  const std::string ppm16 = "P6\n1 1\n65535\n\x00\x01\x00\x01\x00\x01";
  CHECK_THROWS_AS(decode_ppm(Bytes(ppm16.begin(), ppm16.end())), UnsupportedFormat);
  const std::string truncated = "P6\n# comment\n2 2\n255\n\x01\x02\x03";
  CHECK_THROWS_AS(decode_ppm(Bytes(truncated.begin(), truncated.end())), CorruptFile);

  auto png = encode_png(ImageBuffer(8, 8));
  png.resize(png.size() / 2);
  CHECK_THROWS_AS(decode_png(png), CorruptFile);
  CHECK_THROWS_AS(decode_image(Bytes{}), CorruptFile);
  CHECK_THROWS_AS(decode_image(Bytes{'h', 'e', 'l', 'l', 'o'}), UnsupportedFormat);

  CHECK_THROWS_AS(load_image(dir / "missing.png"), IoError);
  CHECK_THROWS_AS(save_image(ImageBuffer(2, 2), dir / "out.jpg"), UnsupportedFormat);
  CHECK_THROWS_AS(save_image(ImageBuffer(2, 2), dir / "out.bmp"), UnsupportedFormat);
}

TEST_CASE("PPM header comments are accepted") {
  const std::string ppm = "P6\n# made by hand\n2 1\n# max\n255\n\x01\x02\x03\x04\x05\x06";
  const auto img = decode_ppm(Bytes(ppm.begin(), ppm.end()));
  CHECK(img.width() == 2);
  CHECK(img[1] == Pixel{4, 5, 6});
}

TEST_CASE("key file grammar") {
  const std::string minimal = "DPISKEY v1\nindicator=RGB\nthreshold=128\n";
  const auto key = parse_key(minimal);
  CHECK(key == StegoKey::from_string("RGB", 128));
  CHECK(serialize_key(key) == minimal);
  CHECK(parse_key("DPISKEY v1\nthreshold=7\nindicator=BBGR") == StegoKey::from_string("BBGR", 7));

  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_key(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("DPISKEY v1\nindicator=RGX\nthreshold=128\n") == 2);
  CHECK(line_of("DPISKEY v1\nindicator=RG\nthreshold=128\n") == 2);
  CHECK(line_of("DPISKEY v2\nindicator=RGB\nthreshold=128\n") == 1);
  CHECK(line_of("DPISKEY v1\nindicator=RGB\nthreshold=256\n") == 3);
  CHECK(line_of("DPISKEY v1\nindicator=RGB\nthreshold=12a\n") == 3);
  CHECK(line_of("DPISKEY v1\nindicator=RGB\nthreshold=1\ncolor=red\n") == 4);
  CHECK(line_of("DPISKEY v1\nindicator=RGB\nindicator=RGB\nthreshold=1\n") == 3);
  CHECK(line_of("DPISKEY v1\nindicator=RGB\n") == 3);
  CHECK(line_of("DPISKEY v1\nindicator=RGB\n\nthreshold=1\n") == 3);
  CHECK(line_of("") == 1);
}

TEST_CASE("manifest file grammar") {
  const std::string text =
      "DPISMANIFEST v1\ndims=4x3\ncount=2\n0 0 1 2 3\n3 2 255 0 128\n";
  const auto m = parse_manifest(text);
  CHECK(m.width == 4);
  CHECK(m.height == 3);
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[1].position == Position{3, 2});
  CHECK(m.entries[1].value == Pixel{255, 0, 128});
  CHECK(serialize_manifest(m) == text);
  CHECK(parse_manifest("DPISMANIFEST v1\ndims=1x1\ncount=0\n").entries.empty());

  auto line_of = [](const std::string& t) -> std::size_t {
    try {
      parse_manifest(t);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("DPISMANIFEST v0\ndims=4x3\ncount=0\n") == 1);
  CHECK(line_of("DPISMANIFEST v1\ndims=4by3\ncount=0\n") == 2);
  CHECK(line_of("DPISMANIFEST v1\ndims=0x3\ncount=0\n") == 2);
  CHECK(line_of("DPISMANIFEST v1\ndims=4x3\ncount=2\n0 0 1 2 3\n") == 5);
  CHECK(line_of("DPISMANIFEST v1\ndims=4x3\ncount=0\n0 0 1 2 3\n") == 4);
  CHECK(line_of("DPISMANIFEST v1\ndims=4x3\ncount=1\n4 0 1 2 3\n") == 4);
  CHECK(line_of("DPISMANIFEST v1\ndims=4x3\ncount=1\n0 0 1 2 256\n") == 4);
  CHECK(line_of("DPISMANIFEST v1\ndims=4x3\ncount=1\n0 0 1 2\n") == 4);
  CHECK(line_of("DPISMANIFEST v1\ndims=4x3\ncount=2\n0 0 1 2 3\n0 0 1 2 3\n") == 5);
}

TEST_CASE("key and manifest round trip over random instances") {
  Rng rng(1000);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Channel> seq(3 + rng.below(60));
    for (auto& c : seq) c = static_cast<Channel>(rng.below(3));
    const StegoKey key(seq, static_cast<std::uint8_t>(rng.below(256)));
    const auto text = serialize_key(key);
    CHECK(parse_key(text) == key);
    CHECK(serialize_key(parse_key(text)) == text);

    IntegrityManifest m;
    m.width = static_cast<std::uint32_t>(1 + rng.below(500));
    m.height = static_cast<std::uint32_t>(1 + rng.below(500));
    std::set<Position> used;
    const auto n = rng.below(20);
    for (std::uint64_t i = 0; i < n; ++i) {
      const Position p{static_cast<std::uint32_t>(rng.below(m.width)), static_cast<std::uint32_t>(rng.below(m.height))};
      if (!used.insert(p).second) continue;
      m.entries.push_back({p,
                           {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                            static_cast<std::uint8_t>(rng.below(256))}});
    }
    std::sort(m.entries.begin(), m.entries.end(), [](const auto& a, const auto& b) { return a.position < b.position; });
    const auto mt = serialize_manifest(m);
    const auto back = parse_manifest(mt);
    CHECK(back.width == m.width);
    CHECK(back.height == m.height);
    CHECK(back.entries == m.entries);
    CHECK(serialize_manifest(back) == mt);
  }
}

TEST_CASE("golden files") {
  const fs::path golden = DPIS_GOLDEN_DIR;
  CHECK(serialize_key(keygen(20, 20240601)) == slurp(golden / "key_len20_seed20240601.txt"));
  CHECK(serialize_key(keygen(3, 1)) == slurp(golden / "key_len3_seed1.txt"));

  const auto mtext = slurp(golden / "manifest_small.txt");
  const auto m = parse_manifest(mtext);
  CHECK(m.entries.size() == 3);
  CHECK(serialize_manifest(m) == mtext);
}
