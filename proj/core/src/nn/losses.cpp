#include "salypath/nn/losses.hpp"

#include <cmath>
#include <vector>

#include "salypath/errors.hpp"

namespace salypath::nn {

namespace {

constexpr double kEps = 1e-7;

void require_pred_shape(const Tensor& pred, const SaliencyMap& gt, const char* what) {
    if (pred.shape.size() != 3 || pred.dim(0) != 1) {
        throw ShapeError(std::string(what) + ": prediction must be a [1,H,W] tensor");
    }
    if (pred.dim(1) != gt.height || pred.dim(2) != gt.width) {
        throw ShapeError(std::string(what) + ": prediction and target dimensions differ");
    }
}

struct KldPiece {
    double value = 0.0;
    std::vector<double> grad;
};

KldPiece kld_piece(const Tensor& pred, const SaliencyMap& gt) {
    const std::size_t n = pred.size();
    double gt_total = 0.0;
    for (double v : gt.values) gt_total += v;
    if (gt_total <= 0.0) throw DegenerateError("saliency_loss: ground truth has zero mass");
    double pred_total = 0.0;
    for (double v : pred.values) pred_total += v;
    if (pred_total <= 0.0) throw DegenerateError("saliency_loss: prediction has zero mass");

    KldPiece out;
    out.grad.assign(n, 0.0);
    std::vector<double> grad_q(n);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = gt.values[i] / gt_total;
        const double q = pred.values[i] / pred_total;
        const double ratio = p / (q + kEps) + kEps;
        out.value += p * std::log(ratio);
        grad_q[i] = -p * p / (ratio * (q + kEps) * (q + kEps));
        dot += grad_q[i] * q;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.grad[i] = (grad_q[i] - dot) / pred_total;
    }
    return out;
}

struct BcePiece {
    double value = 0.0;
    std::vector<double> grad;
};

BcePiece bce_piece(const Tensor& pred, const SaliencyMap& gt) {
    const std::size_t n = pred.size();
    BcePiece out;
    out.grad.assign(n, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = gt.values[i];
        if (y < 0.0 || y > 1.0) {
            throw DomainError("saliency_loss: BCE target values must lie in [0,1]");
        }
        const double q = pred.values[i];
        out.value -= inv_n * (y * std::log(q + kEps) + (1.0 - y) * std::log(1.0 - q + kEps));
        out.grad[i] = -inv_n * (y / (q + kEps) - (1.0 - y) / (1.0 - q + kEps));
    }
    return out;
}

struct NssPiece {
    double value = 0.0;
    std::vector<double> grad;
};

NssPiece nss_piece(const Tensor& pred, const SaliencyMap& fix) {
    const std::size_t n = pred.size();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
        if (fix.values[i] > 0.5) idx.push_back(i);
    }
    if (idx.empty()) throw DegenerateError("saliency_loss: fixation map has no fixations");

    double mean = 0.0;
    for (double v : pred.values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : pred.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double sigma = std::sqrt(var);
    const double s = sigma + kEps;

    const double inv_f = 1.0 / static_cast<double>(idx.size());
    double centered_sum = 0.0;
    for (std::size_t i : idx) centered_sum += pred.values[i] - mean;
    const double a = centered_sum * inv_f;

    NssPiece out;
    out.value = a / s;
    out.grad.assign(n, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i : idx) out.grad[i] += inv_f / s;
    for (std::size_t i = 0; i < n; ++i) out.grad[i] -= inv_n / s;
    if (sigma > 0.0) {
        const double scale = a / (s * s) / (static_cast<double>(n) * sigma);
        for (std::size_t i = 0; i < n; ++i) {
            out.grad[i] -= scale * (pred.values[i] - mean);
        }
    }
    return out;
}

} // namespace

SaliencyLossTerms saliency_loss_terms(const Tensor& pred, const SaliencyMap& gt,
                                      const SaliencyMap& gt_fix) {
    require_pred_shape(pred, gt, "saliency_loss_terms");
    require_pred_shape(pred, gt_fix, "saliency_loss_terms");
    SaliencyLossTerms t;
    t.kldiv = kld_piece(pred, gt).value;
    t.bce = bce_piece(pred, gt).value;
    t.nss = nss_piece(pred, gt_fix).value;
    return t;
}

LossResult saliency_loss(const Tensor& pred, const SaliencyMap& gt, const SaliencyMap& gt_fix) {
    require_pred_shape(pred, gt, "saliency_loss");
    require_pred_shape(pred, gt_fix, "saliency_loss");

    const KldPiece kl = kld_piece(pred, gt);
    const BcePiece bce = bce_piece(pred, gt);
    const NssPiece ns = nss_piece(pred, gt_fix);

    LossResult out;
    out.value = 0.8 * kl.value + 0.2 * bce.value - 0.2 * ns.value;
    out.grad = Tensor(pred.shape);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        out.grad.values[i] = 0.8 * kl.grad[i] + 0.2 * bce.grad[i] - 0.2 * ns.grad[i];
    }
    return out;
}

LossResult scanpath_loss(const Tensor& coords, const Scanpath& gt) {
    if (coords.shape.size() != 2 || coords.dim(1) != 2) {
        throw ShapeError("scanpath_loss: coords must be an [N,2] tensor");
    }
    const std::size_t n = static_cast<std::size_t>(coords.dim(0));
    if (n != gt.fixations.size()) {
        throw ShapeError("scanpath_loss: predicted and ground-truth lengths differ");
    }

    LossResult out;
    out.grad = Tensor(coords.shape);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double du = coords.values[2 * i] - gt.fixations[i].coord.u;
        const double dv = coords.values[2 * i + 1] - gt.fixations[i].coord.v;
        out.value += inv_n * (du * du + dv * dv);
        out.grad.values[2 * i] = 2.0 * inv_n * du;
        out.grad.values[2 * i + 1] = 2.0 * inv_n * dv;
    }
    return out;
}

} // namespace salypath::nn
