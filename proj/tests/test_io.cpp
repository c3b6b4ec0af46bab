#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include "doctest.h"
#include "salypath/dataset.hpp"
#include "salypath/errors.hpp"
#include "salypath/raster_io.hpp"
#include "salypath/rng.hpp"
#include "salypath/scanpath_csv.hpp"
#include "test_support.hpp"

using namespace salypath;

TEST_CASE("raster: 1x1 layout is magic + dims + one float") {
    SaliencyMap m(1, 1);
    m.values[0] = 0.5;
    const auto bytes = write_raster(m);
    REQUIRE(bytes.size() == 16); // 4 magic + 8 dims + 4 payload
    CHECK(std::memcmp(bytes.data(), "SAL1", 4) == 0);
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 1);
    const SaliencyMap back = read_raster(bytes);
    CHECK(back.width == 1);
    CHECK(back.height == 1);
    CHECK(back.values[0] == 0.5);
}

TEST_CASE("raster: write/read round trip is bit-identical") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 1 + static_cast<int>(rng.uniform_index(64));
        const int h = 1 + static_cast<int>(rng.uniform_index(32));
        SaliencyMap m(w, h);
        for (double& v : m.values) v = static_cast<double>(static_cast<float>(rng.uniform()));
        const auto bytes = write_raster(m);
        const SaliencyMap back = read_raster(bytes);
        REQUIRE(back.values == m.values);
        CHECK(write_raster(back) == bytes);
    }
}

TEST_CASE("raster: truncation and bad magic are format errors") {
    SaliencyMap m(4, 2, 0.25);
    auto bytes = write_raster(m);
    auto truncated = bytes;
    truncated.resize(bytes.size() - 3);
    CHECK_THROWS_WITH_AS(read_raster(truncated),
                         doctest::Contains("expected 44 bytes, got 41"), FormatError);

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(read_raster(bad), FormatError);

    auto nan_payload = bytes;
    nan_payload[12] = 0x00;
    nan_payload[13] = 0x00;
    nan_payload[14] = 0xc0;
    nan_payload[15] = 0x7f; // quiet NaN
    CHECK_THROWS_AS(read_raster(nan_payload), FormatError);
}

TEST_CASE("pgm16 export writes a sane header and big-endian payload") {
    SaliencyMap m(2, 1);
    m.values = {0.5, 1.0};
    std::ostringstream out;
    write_pgm16(m, out);
    const std::string s = out.str();
    CHECK(s.rfind("P5\n2 1\n65535\n", 0) == 0);
    const std::size_t off = std::strlen("P5\n2 1\n65535\n");
    REQUIRE(s.size() == off + 4);
    const auto hi0 = static_cast<unsigned char>(s[off]);
    const auto lo0 = static_cast<unsigned char>(s[off + 1]);
    CHECK(hi0 * 256 + lo0 == 32768); // round(0.5 * 65535)
    const auto hi1 = static_cast<unsigned char>(s[off + 2]);
    const auto lo1 = static_cast<unsigned char>(s[off + 3]);
    CHECK(hi1 * 256 + lo1 == 65535);
}

TEST_CASE("scanpath csv: single row parses to one center fixation") {
    const auto result = parse_scanpath_csv(std::string("user,idx,u,v,t\n0,0,0.5,0.5,0.0\n"));
    REQUIRE(result.scanpaths.size() == 1);
    REQUIRE(result.scanpaths[0].fixations.size() == 1);
    CHECK(result.scanpaths[0].user_id == "0");
    CHECK(result.scanpaths[0].fixations[0].coord.u == 0.5);
    CHECK(result.scanpaths[0].fixations[0].coord.v == 0.5);
    REQUIRE(result.scanpaths[0].fixations[0].t.has_value());
    CHECK(*result.scanpaths[0].fixations[0].t == 0.0);
    CHECK(result.clamp_warnings == 0);
}

TEST_CASE("scanpath csv: 36 users x 100 rows -> 36 scanpaths of length 100") {
    std::string text = "user,idx,u,v,t\n";
    for (int u = 0; u < 36; ++u) {
        for (int i = 0; i < 100; ++i) {
            text += std::to_string(u) + "," + std::to_string(i) + ",0.25,0.75," +
                    std::to_string(i) + "\n";
        }
    }
    const auto result = parse_scanpath_csv(text);
    REQUIRE(result.scanpaths.size() == 36);
    for (const auto& sp : result.scanpaths) CHECK(sp.fixations.size() == 100);
}

TEST_CASE("scanpath csv: u = 1.0 clamps to just below 1 with one warning") {
    const auto result = parse_scanpath_csv(std::string("user,idx,u,v,t\na,0,1.0,0.5,\n"));
    CHECK(result.clamp_warnings == 1);
    const double u = result.scanpaths[0].fixations[0].coord.u;
    CHECK(u < 1.0);
    CHECK(u == std::nextafter(1.0, 0.0));
    CHECK_FALSE(result.scanpaths[0].fixations[0].t.has_value());
}

TEST_CASE("scanpath csv: malformed rows carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_scanpath_csv(std::string("user,idx,u,v,t\na,0,zero,0.5,\n")),
                         doctest::Contains("line 2"), FormatError);
    CHECK_THROWS_WITH_AS(parse_scanpath_csv(std::string("user,idx,u,v,t\na,0,0.1,0.5\n")),
                         doctest::Contains("expected 5 fields"), FormatError);
    CHECK_THROWS_AS(parse_scanpath_csv(std::string("wrong,header\n")), FormatError);

    // idx must increase within a user.
    const std::string nonmono = "user,idx,u,v,t\na,0,0.1,0.1,\na,2,0.2,0.2,\na,1,0.3,0.3,\n";
    CHECK_THROWS_WITH_AS(parse_scanpath_csv(nonmono), doctest::Contains("non-monotone"),
                         FormatError);

    const std::string bad_t = "user,idx,u,v,t\na,0,0.1,0.1,5.0\na,1,0.2,0.2,4.0\n";
    CHECK_THROWS_WITH_AS(parse_scanpath_csv(bad_t), doctest::Contains("timestamp"), FormatError);
}

TEST_CASE("scanpath csv: parse and write are mutually inverse") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Scanpath> paths;
        const int n_paths = 1 + static_cast<int>(rng.uniform_index(5));
        for (int p = 0; p < n_paths; ++p) {
            Scanpath sp = testing::random_scanpath(
                rng, 1 + static_cast<int>(rng.uniform_index(20)), "user" + std::to_string(p));
            if (rng.uniform() < 0.5) {
                for (std::size_t i = 0; i < sp.fixations.size(); ++i) {
                    sp.fixations[i].t = static_cast<double>(i) * 0.25;
                }
            }
            paths.push_back(std::move(sp));
        }
        const std::string text = write_scanpath_csv(paths);
        const auto parsed = parse_scanpath_csv(text);
        CHECK(parsed.clamp_warnings == 0);
        REQUIRE(parsed.scanpaths.size() == paths.size());
        for (std::size_t p = 0; p < paths.size(); ++p) {
            CHECK(parsed.scanpaths[p].user_id == paths[p].user_id);
            REQUIRE(parsed.scanpaths[p].fixations.size() == paths[p].fixations.size());
            for (std::size_t i = 0; i < paths[p].fixations.size(); ++i) {
                CHECK(parsed.scanpaths[p].fixations[i].coord.u == paths[p].fixations[i].coord.u);
                CHECK(parsed.scanpaths[p].fixations[i].coord.v == paths[p].fixations[i].coord.v);
                CHECK(parsed.scanpaths[p].fixations[i].t == paths[p].fixations[i].t);
            }
        }
        // Round trip once more at the byte level.
        CHECK(write_scanpath_csv(parsed.scanpaths) == text);
    }
}

TEST_CASE("split_dataset reproduces the 70/15 protocol on 85 ids") {
    std::vector<std::string> ids;
    for (int i = 0; i < 85; ++i) ids.push_back("img" + std::to_string(i));
    const DatasetSplit split = split_dataset(ids, 123);
    CHECK(split.train.size() == 70);
    CHECK(split.test.size() == 15);

    std::set<std::string> seen(split.train.begin(), split.train.end());
    for (const auto& id : split.test) CHECK(seen.insert(id).second);
    CHECK(seen.size() == 85);

    // Deterministic in the seed.
    const DatasetSplit again = split_dataset(ids, 123);
    CHECK(again.train == split.train);
    const DatasetSplit other = split_dataset(ids, 124);
    CHECK(other.train != split.train);
}

TEST_CASE("synthesize_scene is deterministic and blob-peaked") {
    const Scene a = synthesize_scene(77, 64, 32, 3);
    const Scene b = synthesize_scene(77, 64, 32, 3);
    CHECK(a.gt_map.values == b.gt_map.values);
    CHECK(a.image.values == b.image.values);
    REQUIRE(a.gt_scanpaths.size() == b.gt_scanpaths.size());
    for (std::size_t i = 0; i < a.gt_scanpaths.size(); ++i) {
        REQUIRE(a.gt_scanpaths[i].size() == 100);
        for (std::size_t f = 0; f < a.gt_scanpaths[i].size(); ++f) {
            CHECK(a.gt_scanpaths[i].fixations[f].coord.u ==
                  b.gt_scanpaths[i].fixations[f].coord.u);
        }
    }

    const Scene c = synthesize_scene(78, 64, 32, 3);
    CHECK(c.gt_map.values != a.gt_map.values);

    // Single blob: the max sits on the blob's pixel and equals 1.
    const Scene single = synthesize_scene(5, 64, 32, 1);
    CHECK(map_max(single.gt_map) == 1.0);
    const std::size_t peak = map_argmax(single.gt_map);
    CHECK(single.gt_map.values[peak] == 1.0);
}

TEST_CASE("synthesized fixations follow the ground-truth mass (TV oracle)") {
    SceneConfig cfg;
    cfg.width = 64;
    cfg.height = 32;
    cfg.n_blobs = 3;
    cfg.n_scanpaths = 1000;
    cfg.n_fixations = 100; // 1e5 samples total
    const Scene scene = synthesize_scene(99, cfg);

    std::vector<double> hist(scene.gt_map.size(), 0.0);
    double n = 0.0;
    for (const auto& sp : scene.gt_scanpaths) {
        for (const auto& f : sp.fixations) {
            hist[nearest_pixel(f.coord, cfg.width, cfg.height)] += 1.0;
            n += 1.0;
        }
    }
    double mass = 0.0;
    for (double v : scene.gt_map.values) mass += v;
    double tv = 0.0;
    for (std::size_t i = 0; i < hist.size(); ++i) {
        tv += std::fabs(hist[i] / n - scene.gt_map.values[i] / mass);
    }
    tv *= 0.5;
    CHECK(tv < 0.05);
}

TEST_CASE("image_from_plane replicates channels") {
    const Scene scene = synthesize_scene(3, 32, 16, 2);
    SaliencyMap plane(32, 16);
    for (std::size_t i = 0; i < plane.size(); ++i) {
        plane.values[i] = std::max(0.0, scene.image.values[i]);
    }
    const auto img = image_from_plane(plane);
    CHECK(img.shape == std::vector<int>{3, 16, 32});
    for (std::size_t i = 0; i < plane.size(); ++i) {
        CHECK(img.values[i] == plane.values[i]);
        CHECK(img.values[i + plane.size()] == plane.values[i]);
    }
}
