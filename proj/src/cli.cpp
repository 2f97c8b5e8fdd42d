#include "dpis/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>

#include "dpis/analysis.hpp"
#include "dpis/baselines.hpp"
#include "dpis/codec.hpp"
#include "dpis/errors.hpp"
#include "dpis/integrity.hpp"
#include "dpis/io.hpp"
#include "dpis/keyspace.hpp"

namespace dpis {
namespace {

struct Args {
  std::string cover, stego, image, key, message, out, manifest, truth, csv;
  std::string manifest_size = std::to_string(kDefaultManifestSample);
  std::string schema = PartitionSchema::default_schema().to_string();
  std::size_t length = 20;
  std::uint64_t seed = 0;
  std::uint64_t manifest_seed = 0;
  int threshold = kDefaultThreshold;
  std::uint64_t budget = 10000;
  std::size_t expected_len = 0;
  std::size_t top = 5;
  int bits = 2;
  bool explain = false;
};

std::string percent(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

std::string ratio(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

std::string hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xF]);
  }
  return s;
}

std::string printable(std::span<const std::uint8_t> bytes) {
  std::string s;
  for (auto b : bytes) s.push_back(b >= 0x20 && b <= 0x7E ? static_cast<char>(b) : '.');
  return s;
}

std::string read_text(const std::string& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

void print_report(std::ostream& out, const CapacityReport& r, std::string_view prefix = "") {
  out << prefix << "total_pixels=" << r.total_pixels << '\n'
      << prefix << "utilized_pixels=" << r.utilized_pixels << '\n'
      << prefix << "skipped_pixels=" << r.skipped_pixels << '\n'
      << prefix << "capacity_bits=" << r.capacity_bits << '\n'
      << prefix << "used_bits=" << r.used_bits << '\n'
      << prefix << "carried_bits=" << r.carried_bits << '\n'
      << prefix << "utilization_percent=" << percent(r.utilization_percent()) << '\n';
}

void print_attack(std::ostream& out, const AttackReport& r, bool have_truth) {
  out << "attack=" << r.attack << '\n'
      << "recovered_bytes=" << r.recovered.size() << '\n'
      << "printable_ratio=" << ratio(r.printable_ratio) << '\n';
  if (have_truth) out << "match=" << (r.match ? "true" : "false") << '\n';
  out << "recovered_hex=" << hex(r.recovered) << '\n' << "recovered_text=" << printable(r.recovered) << '\n';
}

std::optional<std::size_t> parse_manifest_size(const std::string& s) {
  if (s == "all") return std::nullopt;
  std::size_t pos = 0;
  const auto v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("--manifest-size must be a count or 'all'");
  return static_cast<std::size_t>(v);
}

int report_tamper(std::ostream& out, std::ostream& err, const VerifyResult& v) {
  out << "status=tampered\n" << "mismatches=" << v.mismatches.size() << '\n';
  for (const auto& p : v.mismatches) out << "mismatch=" << p.x << ',' << p.y << '\n';
  err << "error: image was modified at " << v.mismatches.size() << " tracked pixel(s)\n";
  return kExitTampered;
}

StegoKey load_key(const std::string& path) { return parse_key(read_text(path)); }

Bytes optional_truth(const Args& a) { return a.truth.empty() ? Bytes{} : read_file(a.truth); }

std::size_t expected_length(const Args& a, const Bytes& truth, const CLI::App* cmd) {
  if (cmd->count("--expected-len") > 0) return a.expected_len;
  if (!a.truth.empty()) return truth.size();
  throw std::invalid_argument("--expected-len is required without --truth");
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"DPIS image steganography toolkit", "dpis"};
  app.require_subcommand(1);

  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a random indicator-sequence key");
  keygen_cmd->add_option("--length", a.length, "Indicator sequence length (>= 3)")->required();
  keygen_cmd->add_option("--seed", a.seed, "Generator seed")->required();
  keygen_cmd->add_option("--threshold", a.threshold, "Masked value below which data channels take 4 bits")
      ->check(CLI::Range(0, 255));
  keygen_cmd->add_option("--out", a.out, "Key file to write")->required();

  auto* embed_cmd = app.add_subcommand("embed", "Hide a message in a cover image");
  embed_cmd->add_option("--cover", a.cover)->required();
  embed_cmd->add_option("--key", a.key)->required();
  embed_cmd->add_option("--message", a.message, "File holding the message bytes")->required();
  embed_cmd->add_option("--out", a.out, "Stego image (.png or .ppm)")->required();
  embed_cmd->add_option("--manifest", a.manifest, "Integrity manifest to write")->required();
  embed_cmd->add_option("--manifest-size", a.manifest_size, "Tracked pixels, or 'all'");
  embed_cmd->add_option("--manifest-seed", a.manifest_seed, "Seed for sampling tracked pixels");

  auto* extract_cmd = app.add_subcommand("extract", "Recover a message from a stego image");
  extract_cmd->add_option("--stego", a.stego)->required();
  extract_cmd->add_option("--key", a.key)->required();
  extract_cmd->add_option("--out", a.out, "File to write the message to")->required();
  extract_cmd->add_option("--manifest", a.manifest, "Verify against this manifest before extracting");

  auto* verify_cmd = app.add_subcommand("verify", "Check a stego image against its manifest");
  verify_cmd->add_option("--stego", a.stego)->required();
  verify_cmd->add_option("--manifest", a.manifest)->required();

  auto* capacity_cmd = app.add_subcommand("capacity", "Report how much an image can carry under a key");
  capacity_cmd->add_option("--image", a.image)->required();
  capacity_cmd->add_option("--key", a.key)->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "Evaluation instruments");
  analyze_cmd->require_subcommand(1);
  auto* hist_cmd = analyze_cmd->add_subcommand("histogram", "Per-channel histogram distance cover vs stego");
  hist_cmd->add_option("--cover", a.cover)->required();
  hist_cmd->add_option("--stego", a.stego)->required();
  hist_cmd->add_option("--csv", a.csv, "Also write all 256 bins per channel as CSV");
  auto* keyspace_cmd = analyze_cmd->add_subcommand("keyspace", "Number of distinct indicator patterns");
  keyspace_cmd->add_option("--length", a.length)->required();
  keyspace_cmd->add_flag("--explain", a.explain, "Also show the squared-exponent reading");
  auto* compare_cmd = analyze_cmd->add_subcommand("compare", "Pixel utilization of DPIS and both baselines");
  compare_cmd->add_option("--cover", a.cover)->required();
  compare_cmd->add_option("--key", a.key)->required();
  compare_cmd->add_option("--message", a.message)->required();
  compare_cmd->add_option("--schema", a.schema, "Intensity partition, e.g. 0-63:4,64-127:3,128-255:2");

  auto* attack_cmd = app.add_subcommand("attack", "Steganalysis attacks");
  attack_cmd->require_subcommand(1);
  auto* brute_cmd = attack_cmd->add_subcommand("bruteforce", "Try candidate indicator sequences");
  brute_cmd->add_option("--stego", a.stego)->required();
  brute_cmd->add_option("--length", a.length)->required();
  brute_cmd->add_option("--budget", a.budget)->check(CLI::PositiveNumber);
  brute_cmd->add_option("--expected-len", a.expected_len);
  brute_cmd->add_option("--seed", a.seed);
  brute_cmd->add_option("--truth", a.truth, "True message, to report matches");
  brute_cmd->add_option("--top", a.top, "Candidates to print");
  auto* seq_cmd = attack_cmd->add_subcommand("sequential", "Extract as if no pixel were skipped");
  seq_cmd->add_option("--stego", a.stego)->required();
  seq_cmd->add_option("--key", a.key)->required();
  seq_cmd->add_option("--expected-len", a.expected_len);
  seq_cmd->add_option("--truth", a.truth);
  auto* uni_cmd = attack_cmd->add_subcommand("uniform", "Extract a fixed bit count from every pixel");
  uni_cmd->add_option("--stego", a.stego)->required();
  uni_cmd->add_option("--key", a.key)->required();
  uni_cmd->add_option("--bits", a.bits)->check(CLI::Range(1, 4));
  uni_cmd->add_option("--expected-len", a.expected_len);
  uni_cmd->add_option("--truth", a.truth);

  auto* baseline_cmd = app.add_subcommand("baseline", "Comparison schemes");
  baseline_cmd->require_subcommand(1);
  auto* pi_cmd = baseline_cmd->add_subcommand("pixel-indicator", "Two-bit indicator scheme");
  auto* ivb_cmd = baseline_cmd->add_subcommand("intensity-vb", "Intensity-based variable bits scheme");
  struct BaselineCmds {
    CLI::App* embed;
    CLI::App* extract;
  };
  auto add_baseline_ops = [&a](CLI::App* parent, bool with_schema) {
    parent->require_subcommand(1);
    auto* e = parent->add_subcommand("embed");
    e->add_option("--cover", a.cover)->required();
    e->add_option("--message", a.message)->required();
    e->add_option("--out", a.out)->required();
    auto* x = parent->add_subcommand("extract");
    x->add_option("--stego", a.stego)->required();
    x->add_option("--out", a.out)->required();
    if (with_schema) {
      e->add_option("--schema", a.schema);
      x->add_option("--schema", a.schema);
    }
    return BaselineCmds{e, x};
  };
  const auto pi_ops = add_baseline_ops(pi_cmd, false);
  const auto ivb_ops = add_baseline_ops(ivb_cmd, true);

  std::vector<const char*> argv{"dpis"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (keygen_cmd->parsed()) {
      const auto key = keygen(a.length, a.seed, static_cast<std::uint8_t>(a.threshold));
      write_text_file(a.out, serialize_key(key));
      out << "key_length=" << key.length() << '\n';
      return kExitOk;
    }

    if (embed_cmd->parsed()) {
      const auto sample = parse_manifest_size(a.manifest_size);
      const auto cover = load_image(a.cover);
      const auto key = load_key(a.key);
      const auto message = read_file(a.message);
      const auto result = embed(cover, key, message);
      const auto manifest = build_manifest(result.stego, result.skipped_positions, sample, a.manifest_seed);
      save_image(result.stego, a.out);
      write_text_file(a.manifest, serialize_manifest(manifest));
      print_report(out, result.report);
      out << "manifest_entries=" << manifest.entries.size() << '\n';
      return kExitOk;
    }

    if (extract_cmd->parsed()) {
      const auto stego = load_image(a.stego);
      const auto key = load_key(a.key);
      if (!a.manifest.empty()) {
        const auto v = verify_manifest(stego, parse_manifest(read_text(a.manifest)));
        if (!v.ok()) return report_tamper(out, err, v);
        out << "status=ok\n";
      }
      const auto message = extract(stego, key);
      write_file(a.out, message);
      out << "message_bytes=" << message.size() << '\n';
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      const auto stego = load_image(a.stego);
      const auto v = verify_manifest(stego, parse_manifest(read_text(a.manifest)));
      if (!v.ok()) return report_tamper(out, err, v);
      out << "status=ok\n";
      return kExitOk;
    }

    if (capacity_cmd->parsed()) {
      print_report(out, capacity_scan(load_image(a.image), load_key(a.key)));
      return kExitOk;
    }

    if (hist_cmd->parsed()) {
      const auto cover = load_image(a.cover);
      const auto stego = load_image(a.stego);
      if (cover.width() != stego.width() || cover.height() != stego.height())
        throw DimensionMismatch("cover and stego differ in size");
      std::ostringstream csv;
      std::array<Histogram, 3> hc, hs;
      for (Channel c : kChannels) {
        const auto i = static_cast<std::size_t>(c);
        hc[i] = channel_histogram(cover, c);
        hs[i] = channel_histogram(stego, c);
        const auto d = histogram_distance(hc[i], hs[i]);
        const char name = channel_letter(c);
        out << name << ".l1=" << d.l1 << '\n'
            << name << ".max_bin_delta=" << d.max_bin_delta << '\n'
            << name << ".changed_values=" << changed_value_count(cover, stego, c) << '\n';
      }
      if (!a.csv.empty()) {
        csv << "value,cover_r,stego_r,cover_g,stego_g,cover_b,stego_b\n";
        for (std::size_t v = 0; v < 256; ++v) {
          csv << v;
          for (std::size_t c = 0; c < 3; ++c) csv << ',' << hc[c].bins[v] << ',' << hs[c].bins[v];
          csv << '\n';
        }
        write_text_file(a.csv, csv.str());
      }
      return kExitOk;
    }

    if (keyspace_cmd->parsed()) {
      out << "length=" << a.length << '\n' << "patterns=" << keyspace_count(a.length) << '\n';
      if (a.explain) {
        out << "formula=2*3^(n-2)\n"
            << "formula_note=first three indicators a permutation of RGB, the rest free: 3! * 3^(n-3)\n"
            << "alternative_formula=3^((n-2)*2)\n"
            << "alternative_patterns=" << keyspace_count_squared_reading(a.length) << '\n'
            << "alternative_note=squared-exponent reading; does not reproduce the tabulated counts\n";
      }
      return kExitOk;
    }

    if (compare_cmd->parsed()) {
      const auto cover = load_image(a.cover);
      const auto key = load_key(a.key);
      const auto message = read_file(a.message);
      const auto schema = PartitionSchema::parse(a.schema);
      print_report(out, embed(cover, key, message).report, "dpis.");
      print_report(out, pi_embed(cover, message).report, "pixel_indicator.");
      print_report(out, ivb_embed(cover, schema, message).report, "intensity_vb.");
      out << "intensity_vb.note=reconstructed baseline, schema " << schema.to_string() << '\n';
      return kExitOk;
    }

    if (brute_cmd->parsed()) {
      const auto stego = load_image(a.stego);
      const auto truth = optional_truth(a);
      const auto len = expected_length(a, truth, brute_cmd);
      const Truth t = a.truth.empty() ? Truth{} : Truth{truth};
      const auto result = attack_bruteforce(stego, a.length, a.budget, len, a.seed, t);
      out << "attack=bruteforce\n"
          << "keyspace=" << keyspace_count(a.length) << '\n'
          << "exhaustive=" << (result.exhaustive ? "true" : "false") << '\n'
          << "trials=" << result.trials << '\n';
      if (t) out << "matches=" << result.match_count() << '\n';
      for (std::size_t i = 0; i < std::min(a.top, result.candidates.size()); ++i) {
        const auto& c = result.candidates[i];
        out << "candidate=" << c.key.sequence_string() << ' ' << ratio(c.printable_ratio);
        if (t) out << ' ' << (c.match ? "match" : "nomatch");
        out << '\n';
      }
      return kExitOk;
    }

    if (seq_cmd->parsed() || uni_cmd->parsed()) {
      const auto stego = load_image(a.stego);
      const auto key = load_key(a.key);
      const auto truth = optional_truth(a);
      const auto* cmd = seq_cmd->parsed() ? seq_cmd : uni_cmd;
      const auto len = expected_length(a, truth, cmd);
      const Truth t = a.truth.empty() ? Truth{} : Truth{truth};
      const auto report = seq_cmd->parsed() ? attack_sequential(stego, key, len, t)
                                            : attack_uniform(stego, key, a.bits, len, t);
      print_attack(out, report, t.has_value());
      return kExitOk;
    }

    if (pi_ops.embed->parsed() || ivb_ops.embed->parsed()) {
      const auto cover = load_image(a.cover);
      const auto message = read_file(a.message);
      const auto result = pi_ops.embed->parsed() ? pi_embed(cover, message)
                                                 : ivb_embed(cover, PartitionSchema::parse(a.schema), message);
      save_image(result.stego, a.out);
      print_report(out, result.report);
      return kExitOk;
    }

    if (pi_ops.extract->parsed() || ivb_ops.extract->parsed()) {
      const auto stego = load_image(a.stego);
      const auto message = pi_ops.extract->parsed() ? pi_extract(stego)
                                                    : ivb_extract(stego, PartitionSchema::parse(a.schema));
      write_file(a.out, message);
      out << "message_bytes=" << message.size() << '\n';
      return kExitOk;
    }
  } catch (const CapacityError& e) {
    err << "error: capacity exceeded: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const MalformedPayload& e) {
    err << "error: malformed payload: " << e.what() << '\n';
    return kExitMalformedPayload;
  } catch (const ParseError& e) {
    err << "error: parse error at " << e.what() << '\n';
    return kExitMalformedInput;
  } catch (const Error& e) {
    // UnsupportedFormat, CorruptFile, IoError, DimensionMismatch
    err << "error: " << e.what() << '\n';
    return kExitMalformedInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace dpis
