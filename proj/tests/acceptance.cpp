// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "dpis/analysis.hpp"
#include "dpis/baselines.hpp"
#include "dpis/codec.hpp"
#include "dpis/errors.hpp"
#include "dpis/integrity.hpp"
#include "dpis/io.hpp"
#include "dpis/keyspace.hpp"
#include "support/synthetic.hpp"

using namespace dpis;
using namespace dpis::testing;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

std::size_t max_len(std::uint64_t cap) { return cap < kHeaderBits ? 0 : static_cast<std::size_t>((cap - kHeaderBits) / 8); }

// Shared by criteria 2, 3 and 5.
struct Trial {
  ImageBuffer cover;
  StegoKey key;
  Bytes message;
  EmbedResult result;
};

std::vector<Trial> round_trip_trials() {
  std::vector<Trial> trials;
  Rng rng(2024);
  for (int t = 0; t < 100; ++t) {
    auto cover = random_image(64, 64, rng);
    auto key = keygen(20, rng.next());
    const auto cap = max_len(capacity_scan(cover, key).capacity_bits);
    // 10-100% of capacity
    const auto lo = (cap + 9) / 10;
    const auto len = lo + rng.below(cap - lo + 1);
    auto msg = random_bytes(len, rng);
    auto res = embed(cover, key, msg);
    trials.push_back({std::move(cover), std::move(key), std::move(msg), std::move(res)});
  }
  return trials;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  const auto trials = round_trip_trials();

  report(1, "keyspace counts", [] {
    const bool ok = keyspace_count(3) == 6 && keyspace_count(10) == 13122 && keyspace_count(15) == 3188646 &&
                    keyspace_count(20) == 774840978;
    return Outcome{ok, "n=3,10,15,20 -> " + keyspace_count(3).str() + ", " + keyspace_count(10).str() + ", " +
                           keyspace_count(15).str() + ", " + keyspace_count(20).str()};
  });

  report(2, "round trip", [&] {
    int ok = 0;
    for (const auto& t : trials) ok += extract(t.result.stego, t.key) == t.message ? 1 : 0;
    return Outcome{ok == 100, fmt("%d/100 byte-identical", ok)};
  });

  report(3, "delta bound", [&] {
    std::uint64_t violations = 0, skipped_checked = 0;
    for (const auto& t : trials) {
      const std::set<Position> skipped(t.result.skipped_positions.begin(), t.result.skipped_positions.end());
      for (std::size_t i = 0; i < t.cover.size(); ++i) {
        const auto& a = t.cover[i];
        const auto& b = t.result.stego[i];
        const auto ind = t.key.indicator_for(i);
        const auto plan = plan_pixel(a, ind, t.key.threshold());
        if (skipped.count(t.cover.position_of(i))) {
          ++skipped_checked;
          violations += (a == b) ? 0 : 1;
          continue;
        }
        if (!plan) {
          violations += (a == b) ? 0 : 1;
          continue;
        }
        for (Channel c : kChannels) {
          const int allowed = c == plan->data_channel ? 0x0F : 0x01;
          violations += ((a[c] ^ b[c]) & ~allowed) ? 1 : 0;
        }
      }
    }
    return Outcome{violations == 0,
                   fmt("%llu violations, %llu skipped pixels byte-identical checked", (unsigned long long)violations,
                       (unsigned long long)skipped_checked)};
  });

  report(4, "capacity ordering vs pixel indicator", [] {
    struct Case {
      Scene scene;
      std::uint32_t w, h;
      std::size_t msg_len;
    };
    const Case cases[] = {{Scene::Landscape, 300, 266, 1920}, {Scene::Portrait, 274, 255, 1920},
                          {Scene::Flower, 300, 225, 2642},    {Scene::Night, 320, 240, 2642},
                          {Scene::Toys, 300, 300, 3470},      {Scene::Overcast, 320, 256, 3470}};
    const auto key = keygen(20, 99);
    const auto schema = PartitionSchema::default_schema();
    Rng rng(4);
    bool ok = true;
    std::string lines;
    for (const auto& c : cases) {
      const auto cover = photo_like(c.scene, c.w, c.h, 1000 + static_cast<std::uint64_t>(c.scene));
      const auto msg = random_ascii(c.msg_len, rng);
      const auto d = embed(cover, key, msg).report;
      const auto p = pi_embed(cover, msg).report;
      const auto v = ivb_embed(cover, schema, msg).report;
      const double bpp = static_cast<double>(d.carried_bits) / static_cast<double>(d.utilized_pixels);
      const bool row_ok = d.utilized_pixels < p.utilized_pixels && bpp >= 3.0 && bpp <= 4.0;
      ok = ok && row_ok;
      lines += fmt("\n       %-9s %ux%u msg=%zuB  dpis=%llu (%.2f%%, %.3f b/px)  pixel-indicator=%llu (%.2f%%)  "
                   "[reconstructed ivb=%llu (%.2f%%)]%s",
                   scene_name(c.scene), c.w, c.h, c.msg_len, (unsigned long long)d.utilized_pixels,
                   d.utilization_percent(), bpp, (unsigned long long)p.utilized_pixels, p.utilization_percent(),
                   (unsigned long long)v.utilized_pixels, v.utilization_percent(), row_ok ? "" : "  <-- fails");
    }
    return Outcome{ok, "6 scenes" + lines};
  });

  report(5, "histogram invisibility", [&] {
    std::uint64_t bad = 0, checks = 0;
    for (const auto& t : trials) {
      for (Channel c : kChannels) {
        const auto d = histogram_distance(channel_histogram(t.cover, c), channel_histogram(t.result.stego, c));
        const auto changed = changed_value_count(t.cover, t.result.stego, c);
        bad += (d.l1 <= 2 * changed && d.max_bin_delta <= changed) ? 0 : 1;
        ++checks;
      }
    }
    return Outcome{bad == 0, fmt("%llu/%llu channel checks violate the bound", (unsigned long long)bad,
                                 (unsigned long long)checks)};
  });

  report(6, "wrong-key failure", [] {
    Rng rng(6);
    int matches = 0;
    for (int t = 0; t < 1000; ++t) {
      const auto cover = random_image(48, 48, rng);
      const auto key = keygen(20, rng.next());
      const auto msg = random_ascii(8 + rng.below(25), rng);
      const auto stego = embed(cover, key, msg).stego;
      std::vector<Channel> seq;
      do {
        seq.assign(20, Channel::R);
        for (auto& c : seq) c = static_cast<Channel>(rng.below(3));
      } while (seq == key.indicators());
      try {
        matches += extract(stego, StegoKey(seq)) == msg ? 1 : 0;
      } catch (const MalformedPayload&) {
      }
    }
    return Outcome{matches < 10, fmt("%d/1000 wrong keys recovered the message", matches)};
  });

  report(7, "sequential attack failure", [] {
    Rng rng(7);
    int trials_with_skips = 0, matches = 0;
    while (trials_with_skips < 200) {
      const auto cover = random_image(64, 64, rng);
      const auto key = keygen(20, rng.next());
      const auto msg = random_ascii(8 + rng.below(100), rng);
      const auto res = embed(cover, key, msg);
      if (res.report.skipped_pixels == 0) continue;
      ++trials_with_skips;
      matches += attack_sequential(res.stego, key, msg.size(), msg).match ? 1 : 0;
    }
    return Outcome{matches == 0, fmt("%d/%d trials recovered the message", matches, trials_with_skips)};
  });

  report(8, "uniform-bits attack failure (k=2)", [] {
    Rng rng(8);
    int trials = 0, matches = 0;
    while (trials < 200) {
      const auto cover = random_image(64, 64, rng);
      const auto key = keygen(20, rng.next());
      const auto msg = random_ascii(8 + rng.below(100), rng);
      const auto res = embed(cover, key, msg);
      // Only count embeddings that actually mix 3- and 4-bit pixels.
      std::set<int> counts;
      std::uint64_t bits = 0;
      for (const auto& s : schedule(cover, key)) {
        if (bits >= res.report.used_bits) break;
        if (!s.plan) continue;
        counts.insert(s.plan->bit_count);
        bits += static_cast<std::uint64_t>(s.plan->bit_count);
      }
      if (counts.size() < 2) continue;
      ++trials;
      matches += attack_uniform(res.stego, key, 2, msg.size(), msg).match ? 1 : 0;
    }
    return Outcome{matches == 0, fmt("%d/%d trials recovered the message", matches, trials)};
  });

  report(9, "brute-force infeasibility", [] {
    Rng rng(9);
    const auto msg = random_ascii(16, rng);
    std::size_t matches = 0;
    std::uint64_t tried = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto cover = random_image(64, 64, rng);
      const auto key = keygen(20, rng.next());
      const auto stego = embed(cover, key, msg).stego;
      const auto bf = attack_bruteforce(stego, 20, 10000, msg.size(), seed, msg);
      matches += bf.match_count();
      tried += bf.trials;
    }
    const auto cover = random_image(64, 64, rng);
    const auto key3 = keygen(3, 123);
    const auto bf3 = attack_bruteforce(embed(cover, key3, msg).stego, 3, 6, msg.size(), 1, msg);
    const bool found = bf3.exhaustive && bf3.trials <= 6 && bf3.match_count() >= 1 &&
                       bf3.candidates.front().key.indicators() == key3.indicators();
    return Outcome{matches == 0 && found,
                   fmt("n=20: %zu matches in %llu candidates over 10 seeds; n=3: %s in %llu trials", matches,
                       (unsigned long long)tried, found ? "key found" : "key NOT found",
                       (unsigned long long)bf3.trials)};
  });

  report(10, "tamper detection", [] {
    Rng rng(10);
    std::uint64_t perturbations = 0, detected = 0, clean = 0, clean_ok = 0;
    for (int t = 0; t < 10; ++t) {
      const auto cover = random_image(64, 64, rng);
      const auto key = keygen(20, rng.next());
      const auto res = embed(cover, key, random_bytes(100 + rng.below(800), rng));
      const auto manifest = build_manifest(res.stego, res.skipped_positions, kDefaultManifestSample, rng.next());
      ++clean;
      clean_ok += verify_manifest(res.stego, manifest).ok() ? 1 : 0;
      auto img = res.stego;
      for (const auto& e : manifest.entries) {
        for (Channel c : kChannels) {
          for (int bit = 0; bit < 8; ++bit) {
            auto& px = img.at(e.position.x, e.position.y);
            const auto saved = px;
            px[c] = static_cast<std::uint8_t>(px[c] ^ (1U << bit));
            const auto v = verify_manifest(img, manifest);
            ++perturbations;
            detected += (v.mismatches.size() == 1 && v.mismatches.front() == e.position) ? 1 : 0;
            px = saved;
          }
        }
      }
    }
    return Outcome{perturbations > 0 && detected == perturbations && clean_ok == clean,
                   fmt("%llu/%llu perturbations named exactly; %llu/%llu clean images Ok",
                       (unsigned long long)detected, (unsigned long long)perturbations, (unsigned long long)clean_ok,
                       (unsigned long long)clean)};
  });

  report(11, "key/manifest format round trips", [] {
    Rng rng(11);
    int ok = 0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<Channel> seq(3 + rng.below(100));
      for (auto& c : seq) c = static_cast<Channel>(rng.below(3));
      const StegoKey key(seq, static_cast<std::uint8_t>(rng.below(256)));
      const auto kt = serialize_key(key);

      IntegrityManifest m;
      m.width = static_cast<std::uint32_t>(1 + rng.below(4000));
      m.height = static_cast<std::uint32_t>(1 + rng.below(4000));
      std::set<Position> used;
      for (std::uint64_t i = 0, n = rng.below(100); i < n; ++i) {
        const Position p{static_cast<std::uint32_t>(rng.below(m.width)),
                         static_cast<std::uint32_t>(rng.below(m.height))};
        if (used.insert(p).second) {
          m.entries.push_back({p,
                               {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                                static_cast<std::uint8_t>(rng.below(256))}});
        }
      }
      std::sort(m.entries.begin(), m.entries.end(),
                [](const auto& a, const auto& b) { return a.position < b.position; });
      const auto mt = serialize_manifest(m);
      const auto back = parse_manifest(mt);
      ok += (parse_key(kt) == key && serialize_key(parse_key(kt)) == kt && back.entries == m.entries &&
             back.width == m.width && back.height == m.height && serialize_manifest(back) == mt)
                ? 1
                : 0;
    }
    const std::filesystem::path golden = DPIS_GOLDEN_DIR;
    const bool golden_ok = serialize_key(keygen(20, 20240601)) == slurp(golden / "key_len20_seed20240601.txt") &&
                           serialize_key(keygen(3, 1)) == slurp(golden / "key_len3_seed1.txt") &&
                           serialize_manifest(parse_manifest(slurp(golden / "manifest_small.txt"))) ==
                               slurp(golden / "manifest_small.txt");
    return Outcome{ok == 1000 && golden_ok,
                   fmt("%d/1000 bit-exact; golden files %s", ok, golden_ok ? "stable" : "CHANGED")};
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
