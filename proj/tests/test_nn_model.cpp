#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "salypath/dataset.hpp"
#include "salypath/errors.hpp"
#include "salypath/heatmap.hpp"
#include "salypath/nn/checkpoint.hpp"
#include "salypath/nn/grad_check.hpp"
#include "salypath/nn/losses.hpp"
#include "salypath/nn/model.hpp"
#include "salypath/rng.hpp"

using namespace salypath;
using namespace salypath::nn;

namespace {

ModelConfig tiny_config() {
    ModelConfig cfg;
    cfg.width = 32;
    cfg.height = 16;
    cfg.widths = {4, 6, 8, 10};
    cfg.aux_width = 8;
    cfg.n_fixations = 12;
    return cfg;
}

Tensor random_image(Rng& rng, const ModelConfig& cfg) {
    Tensor img({3, cfg.height, cfg.width});
    for (double& v : img.values) v = rng.uniform();
    return img;
}

} // namespace

TEST_CASE("attention refinement is the identity at gamma = 0") {
    Rng rng(70);
    AttentionRefine att(4);
    att.init(rng);
    REQUIRE(att.gamma.values[0] == 0.0);

    Tensor x({4, 6, 8});
    for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
    const Tensor out = att.forward(x);
    CHECK(out.values == x.values);
}

TEST_CASE("attention refinement doubles the input when A is saturated and gamma = 1") {
    Rng rng(71);
    AttentionRefine att(3);
    att.init(rng);
    att.gamma.values[0] = 1.0;
    // Saturate the sigmoid: zero the last conv, push its bias high.
    std::fill(att.conv3.weight.values.begin(), att.conv3.weight.values.end(), 0.0);
    att.conv3.bias.values[0] = 40.0;

    Tensor x({3, 4, 4});
    for (double& v : x.values) v = rng.uniform(0.2, 1.0);
    const Tensor out = att.forward(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(out.values[i] == doctest::Approx(2.0 * x.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("attention refinement gradient w.r.t. gamma matches finite differences") {
    Rng rng(72);
    AttentionRefine att(3);
    att.init(rng);
    att.gamma.values[0] = 0.3;

    Tensor x({3, 4, 6});
    for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
    Tensor probe(x.shape);
    for (double& v : probe.values) v = rng.uniform(-1.0, 1.0);

    auto objective = [&]() {
        const Tensor out = att.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) s += out.values[i] * probe.values[i];
        return s;
    };

    att.gamma.zero_grad();
    att.conv1.weight.zero_grad();
    att.conv1.bias.zero_grad();
    att.conv2.weight.zero_grad();
    att.conv2.bias.zero_grad();
    att.conv3.weight.zero_grad();
    att.conv3.bias.zero_grad();
    objective();
    att.backward(probe);
    const double analytic = att.gamma.grad[0];

    const double h = 1e-5;
    const double saved = att.gamma.values[0];
    att.gamma.values[0] = saved + h;
    const double plus = objective();
    att.gamma.values[0] = saved - h;
    const double minus = objective();
    att.gamma.values[0] = saved;
    const double fd = (plus - minus) / (2.0 * h);
    CHECK(std::fabs(analytic - fd) / std::max({std::fabs(fd), std::fabs(analytic), 1e-6}) < 1e-4);
}

TEST_CASE("forward output shapes, ranges and determinism") {
    Rng rng(73);
    const ModelConfig cfg = tiny_config();
    SalyPathNet net(cfg, 5);
    const Tensor img = random_image(rng, cfg);

    const auto out1 = net.forward(img);
    CHECK(out1.saliency.shape == std::vector<int>{1, cfg.height, cfg.width});
    for (double v : out1.saliency.values) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    CHECK(out1.coords.shape == std::vector<int>{cfg.n_fixations, 2});
    for (double v : out1.coords.values) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }

    const auto out2 = net.forward(img);
    CHECK(out1.saliency.values == out2.saliency.values);
    CHECK(out1.coords.values == out2.coords.values);

    const Scanpath sp = net.coords_to_scanpath(out1.coords);
    CHECK(sp.size() == static_cast<std::size_t>(cfg.n_fixations));

    Tensor bad({3, 8, 8});
    CHECK_THROWS_AS(net.encode(bad), ShapeError);
    ModelConfig broken = cfg;
    broken.width = 20;
    CHECK_THROWS_AS(SalyPathNet(broken, 0), DomainError);
}

TEST_CASE("default config carries the documented values") {
    const ModelConfig cfg;
    CHECK(cfg.n_fixations == 100);
    CHECK(cfg.beta == 25.0);
    CHECK(cfg.aux_depth == 4);
}

TEST_CASE("saliency loss decomposes into its three terms") {
    Rng rng(74);
    SceneConfig scfg;
    scfg.width = 32;
    scfg.height = 16;
    scfg.n_scanpaths = 4;
    scfg.n_fixations = 12;
    const Scene scene = synthesize_scene(8, scfg);
    const SaliencyMap fix =
        fixation_map(scene.gt_scanpaths, scene.gt_map.width, scene.gt_map.height);

    Tensor pred({1, 16, 32});
    for (double& v : pred.values) v = rng.uniform(0.01, 0.99);

    const LossResult l = saliency_loss(pred, scene.gt_map, fix);
    const SaliencyLossTerms t = saliency_loss_terms(pred, scene.gt_map, fix);
    CHECK(l.value ==
          doctest::Approx(0.8 * t.kldiv + 0.2 * t.bce - 0.2 * t.nss).epsilon(1e-14));

    // Matching prediction: KL term nearly zero, value = 0.2 BCE - 0.2 NSS.
    Tensor exact({1, 16, 32});
    for (std::size_t i = 0; i < exact.size(); ++i) {
        exact.values[i] = std::min(1.0 - 1e-9, std::max(1e-9, scene.gt_map.values[i]));
    }
    const SaliencyLossTerms te = saliency_loss_terms(exact, scene.gt_map, fix);
    CHECK(std::fabs(te.kldiv) < 1e-4);
    const LossResult le = saliency_loss(exact, scene.gt_map, fix);
    CHECK(le.value == doctest::Approx(0.8 * te.kldiv + 0.2 * te.bce - 0.2 * te.nss).epsilon(1e-12));
}

TEST_CASE("saliency loss gradient matches finite differences on an 8x16 case") {
    Rng rng(75);
    SaliencyMap gt(16, 8);
    for (double& v : gt.values) v = rng.uniform();
    max_normalize(gt);
    SaliencyMap fix(16, 8);
    for (int i = 0; i < 9; ++i) fix.values[rng.uniform_index(fix.size())] = 1.0;

    Tensor pred({1, 8, 16});
    for (double& v : pred.values) v = rng.uniform(0.05, 0.95);

    const LossResult l = saliency_loss(pred, gt, fix);
    double worst = 0.0;
    const double h = 1e-5;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double saved = pred.values[i];
        pred.values[i] = saved + h;
        const double plus = saliency_loss(pred, gt, fix).value;
        pred.values[i] = saved - h;
        const double minus = saliency_loss(pred, gt, fix).value;
        pred.values[i] = saved;
        const double fd = (plus - minus) / (2.0 * h);
        const double denom = std::max({std::fabs(fd), std::fabs(l.grad.values[i]), 1e-6});
        worst = std::max(worst, std::fabs(fd - l.grad.values[i]) / denom);
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("scanpath loss anchors and gradient") {
    Scanpath gt;
    gt.user_id = "g";
    gt.fixations.push_back({{0.4, 0.6}, std::nullopt});

    Tensor exact({1, 2});
    exact.values = {0.4, 0.6};
    CHECK(scanpath_loss(exact, gt).value == 0.0);

    Tensor off({1, 2});
    off.values = {0.5, 0.6}; // offset (0.1, 0)
    CHECK(scanpath_loss(off, gt).value == doctest::Approx(0.01).epsilon(1e-12));

    Rng rng(76);
    Scanpath gt2;
    gt2.user_id = "g2";
    for (int i = 0; i < 7; ++i) {
        gt2.fixations.push_back({{rng.uniform(), rng.uniform()}, std::nullopt});
    }
    Tensor coords({7, 2});
    for (double& v : coords.values) v = rng.uniform();
    const LossResult l = scanpath_loss(coords, gt2);
    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const double saved = coords.values[i];
        coords.values[i] = saved + h;
        const double plus = scanpath_loss(coords, gt2).value;
        coords.values[i] = saved - h;
        const double minus = scanpath_loss(coords, gt2).value;
        coords.values[i] = saved;
        const double fd = (plus - minus) / (2.0 * h);
        worst = std::max(worst,
                         std::fabs(fd - l.grad.values[i]) /
                             std::max({std::fabs(fd), std::fabs(l.grad.values[i]), 1e-6}));
    }
    CHECK(worst < 1e-6);

    Tensor wrong({3, 2});
    CHECK_THROWS_AS(scanpath_loss(wrong, gt2), ShapeError);
}

TEST_CASE("grad_check validates both loss paths end to end") {
    SceneConfig scfg;
    scfg.width = 32;
    scfg.height = 16;
    scfg.n_scanpaths = 3;
    scfg.n_fixations = 12; // matches tiny_config
    const Scene scene = synthesize_scene(21, scfg);

    SalyPathNet net(tiny_config(), 3);
    const auto l1 = grad_check(net, scene, LossKind::SaliencyL1, 60, 11);
    CHECK(l1.n_coordinates == 60);
    CHECK(l1.max_rel_error < 1e-4);

    const auto l2 = grad_check(net, scene, LossKind::ScanpathL2, 60, 12);
    CHECK(l2.max_rel_error < 1e-4);
}

TEST_CASE("checkpoint round trip preserves config and f32-rounded params") {
    const ModelConfig cfg = tiny_config();
    SalyPathNet net(cfg, 17);
    const auto path = (std::filesystem::temp_directory_path() / "salypath_ckpt_test.spw").string();
    save_checkpoint(net, path);
    SalyPathNet back = load_checkpoint(path);

    CHECK(back.config().width == cfg.width);
    CHECK(back.config().widths == cfg.widths);
    CHECK(back.config().beta == cfg.beta);
    CHECK(back.config().n_fixations == cfg.n_fixations);

    const auto orig = net.named_parameters();
    const auto loaded = back.named_parameters();
    REQUIRE(orig.size() == loaded.size());
    for (std::size_t i = 0; i < orig.size(); ++i) {
        CHECK(orig[i].first == loaded[i].first);
        REQUIRE(orig[i].second->size() == loaded[i].second->size());
        for (std::size_t j = 0; j < orig[i].second->size(); ++j) {
            CHECK(loaded[i].second->values[j] ==
                  static_cast<double>(static_cast<float>(orig[i].second->values[j])));
        }
    }

    // A second save emits identical bytes.
    const auto path2 = (std::filesystem::temp_directory_path() / "salypath_ckpt_test2.spw").string();
    save_checkpoint(back, path2);
    SalyPathNet twice = load_checkpoint(path2);
    const auto again = twice.named_parameters();
    for (std::size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i].second->values == loaded[i].second->values);
    }
    std::remove(path.c_str());
    std::remove(path2.c_str());

    CHECK_THROWS_AS(load_checkpoint("/nonexistent/salypath.spw"), FormatError);
}
