#pragma once

// Logistic-regression probe on frozen embeddings, trained by full-batch
// gradient descent from zero.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/types.hpp"

namespace relkit {

struct ProbeHyper {
    double learning_rate = 0.1;
    std::size_t epochs = 500;
};

struct ProbeModel {
    std::vector<double> weights;
    double bias = 0.0;
    ProbeHyper hyper;
    double final_loss = 0.0;
    std::vector<double> loss_history; ///< loss before each epoch, then after the last
};

/// Design matrix and targets (1 = same) in embedding row order.
struct ProbeData {
    std::size_t dim = 0;
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const noexcept { return y.size(); }
};

inline ProbeData probe_data(const EmbeddingMatrix& emb, const std::map<std::string, Label>& labels) {
    emb.check();
    ProbeData d;
    d.dim = emb.dim;
    d.x.reserve(emb.values.size());
    for (std::size_t i = 0; i < emb.rows(); ++i) {
        const auto it = labels.find(emb.ids[i]);
        if (it == labels.end()) throw InputError("no label for embedding '" + emb.ids[i] + "'");
        if (it->second == Label::none) throw InputError("embedding '" + emb.ids[i] + "' has no same/different label");
        for (float v : emb.row(i)) d.x.push_back(v);
        d.y.push_back(it->second == Label::same ? 1.0 : 0.0);
    }
    if (labels.size() != emb.rows()) throw InputError("label file names ids that are not in the embedding file");
    return d;
}

namespace detail {

/// log(1 + e^z) without overflow.
inline double softplus(double z) noexcept { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace detail

/// Mean binary cross-entropy and its gradient; grad has dim + 1 entries, the
/// last for the bias.
inline double loss_and_gradient(const ProbeData& d, const std::vector<double>& w, double b, std::vector<double>* grad) {
    const std::size_t n = d.size(), k = d.dim;
    if (w.size() != k) throw InputError("probe: weight dimension mismatch");
    if (grad) grad->assign(k + 1, 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = &d.x[i * k];
        double z = b;
        for (std::size_t j = 0; j < k; ++j) z += w[j] * xi[j];
        loss += detail::softplus(z) - d.y[i] * z;
        if (grad) {
            const double r = detail::sigmoid(z) - d.y[i];
            for (std::size_t j = 0; j < k; ++j) (*grad)[j] += r * xi[j];
            (*grad)[k] += r;
        }
    }
    const double inv = 1.0 / static_cast<double>(n);
    if (grad)
        for (auto& g : *grad) g *= inv;
    return loss * inv;
}

inline ProbeModel train_probe(const ProbeData& d, const ProbeHyper& hyper = {}) {
    if (d.size() == 0) throw InputError("probe: no training rows");
    std::size_t pos = 0;
    for (double y : d.y) pos += y > 0.5 ? 1 : 0;
    if (pos == 0 || pos == d.size()) throw InputError("probe: training labels contain a single class");
    if (!(hyper.learning_rate > 0) || !std::isfinite(hyper.learning_rate))
        throw ConfigError("probe: learning rate must be positive");

    ProbeModel m;
    m.hyper = hyper;
    m.weights.assign(d.dim, 0.0);
    std::vector<double> g;
    for (std::size_t e = 0; e < hyper.epochs; ++e) {
        m.loss_history.push_back(loss_and_gradient(d, m.weights, m.bias, &g));
        for (std::size_t j = 0; j < d.dim; ++j) m.weights[j] -= hyper.learning_rate * g[j];
        m.bias -= hyper.learning_rate * g[d.dim];
    }
    m.final_loss = loss_and_gradient(d, m.weights, m.bias, nullptr);
    m.loss_history.push_back(m.final_loss);
    for (double w : m.weights)
        if (!std::isfinite(w)) throw GenerationError("probe diverged; lower the learning rate");
    if (!std::isfinite(m.bias)) throw GenerationError("probe diverged; lower the learning rate");
    return m;
}

inline ProbeModel train_probe(const EmbeddingMatrix& emb, const std::map<std::string, Label>& labels,
                              const ProbeHyper& hyper = {}) {
    return train_probe(probe_data(emb, labels), hyper);
}

/// score_same = sigmoid(w.x + b), logit_same = w.x + b, "same" iff score >= 0.5.
inline PredictionFile probe_predict(const ProbeModel& model, const EmbeddingMatrix& emb,
                                    const std::string& model_id = "probe", std::int64_t seed_id = 0) {
    emb.check();
    if (emb.dim != model.weights.size()) throw InputError("probe: embedding dimension mismatch");
    PredictionFile out;
    out.threshold = 0.5;
    out.rule = DecisionRule::threshold;
    for (std::size_t i = 0; i < emb.rows(); ++i) {
        double z = model.bias;
        const auto row = emb.row(i);
        for (std::size_t j = 0; j < emb.dim; ++j) z += model.weights[j] * row[j];
        PredictionRecord r;
        r.stimulus_id = emb.ids[i];
        r.score_same = detail::sigmoid(z);
        r.logit_same = z;
        r.model_id = model_id;
        r.seed_id = seed_id;
        r.predicted = r.score_same >= 0.5 ? Label::same : Label::different;
        out.rows.push_back(std::move(r));
    }
    return out;
}

} // namespace relkit
