#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "relkit/embed/probe.hpp"
#include "relkit/embed/similarity.hpp"
#include "relkit/seed_stream.hpp"

using namespace relkit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

EmbeddingMatrix random_embeddings(std::size_t n, std::size_t dim, std::uint64_t seed, double offset = 0.0) {
    SeedStream s(seed, 0);
    EmbeddingMatrix m;
    m.dim = dim;
    for (std::size_t i = 0; i < n; ++i) {
        m.ids.push_back("e" + std::to_string(i));
        for (std::size_t k = 0; k < dim; ++k) m.values.push_back(static_cast<float>(s.normal() + offset));
    }
    return m;
}

std::vector<std::vector<double>> as_rows(const EmbeddingMatrix& m) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

/// Two Gaussian clusters on either side of a random hyperplane, with a gap.
std::pair<EmbeddingMatrix, std::map<std::string, Label>> separable(std::size_t n, std::size_t dim, std::uint64_t seed) {
    SeedStream s(seed, 1);
    std::vector<double> normal(dim);
    double nn = 0;
    for (auto& v : normal) {
        v = s.normal();
        nn += v * v;
    }
    for (auto& v : normal) v /= std::sqrt(nn);
    EmbeddingMatrix m;
    m.dim = dim;
    std::map<std::string, Label> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const bool same = i % 2 == 0;
        std::vector<double> x(dim);
        double along = 0;
        for (std::size_t k = 0; k < dim; ++k) {
            x[k] = 0.3 * s.normal();
            along += x[k] * normal[k];
        }
        const double target = (same ? 1.0 : -1.0) * (0.5 + std::abs(s.normal()) * 0.3);
        for (std::size_t k = 0; k < dim; ++k) x[k] += (target - along) * normal[k];
        m.ids.push_back("p" + std::to_string(i));
        for (double v : x) m.values.push_back(static_cast<float>(v));
        labels[m.ids.back()] = same ? Label::same : Label::different;
    }
    return {m, labels};
}

} // namespace

TEST_CASE("cosine similarity") {
    const std::vector<float> a{1, 0, 0}, b{0, 2, 0}, c{-3, 0, 0};
    CHECK(cosine(a, a) == 1.0);
    CHECK(cosine(a, b) == 0.0);
    CHECK(cosine(a, c) == -1.0);
}

TEST_CASE("pairwise summary matches the naive oracle") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto m = random_embeddings(100, 96, seed, seed == 3 ? 0.5 : 0.0);
        const auto got = pairwise_summary(m);
        const auto want = oracle::naive_pairwise(as_rows(m));
        CHECK(got.pair_count == 4950);
        CHECK(got.pair_count == want.pairs);
        CHECK_THAT(got.mean, WithinAbs(want.mean, 1e-6));
        CHECK_THAT(got.variance, WithinAbs(want.variance, 1e-6));
        std::uint64_t total = 0;
        for (auto h : got.histogram) total += h;
        CHECK(total == 4950);
    }
}

TEST_CASE("histogram bins agree with double-precision binning") {
    const auto m = random_embeddings(60, 16, 9, 0.3);
    PairwiseOptions o;
    o.bins = 20;
    const auto got = pairwise_summary(m, o);
    const auto rows = as_rows(m);
    std::vector<std::uint64_t> want(20, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double dot = 0, ni = 0, nj = 0;
            for (std::size_t k = 0; k < 16; ++k) {
                dot += rows[i][k] * rows[j][k];
                ni += rows[i][k] * rows[i][k];
                nj += rows[j][k] * rows[j][k];
            }
            const double c = dot / std::sqrt(ni * nj);
            want[std::min<std::size_t>(19, static_cast<std::size_t>((c + 1) * 10))]++;
        }
    // float rounding may move a pair sitting on a bin edge
    std::uint64_t moved = 0;
    for (std::size_t b = 0; b < 20; ++b) moved += got.histogram[b] > want[b] ? got.histogram[b] - want[b] : 0;
    CHECK(moved <= 2);
    CHECK(got.bin_left(0) == -1.0);
    CHECK(got.bin_right(19) == 1.0);
}

TEST_CASE("identical rows land in the top bin") {
    EmbeddingMatrix m;
    m.dim = 3;
    for (int i = 0; i < 5; ++i) {
        m.ids.push_back(std::to_string(i));
        m.values.insert(m.values.end(), {1.f, 2.f, 3.f});
    }
    const auto s = pairwise_summary(m);
    CHECK(s.histogram.back() == 10);
    CHECK_THAT(s.mean, WithinAbs(1.0, 1e-7));
    CHECK_THAT(s.variance, WithinAbs(0.0, 1e-12));
}

TEST_CASE("pairwise results do not depend on tiling or threads") {
    const auto m = random_embeddings(157, 40, 4);
    PairwiseOptions base;
    base.jobs = 1;
    const auto ref = pairwise_summary(m, base);
    for (std::size_t block : {1u, 7u, 64u, 500u})
        for (unsigned jobs : {1u, 3u}) {
            PairwiseOptions o;
            o.block = block;
            o.jobs = jobs;
            const auto s = pairwise_summary(m, o);
            CHECK(s.mean == ref.mean);
            CHECK(s.variance == ref.variance);
            CHECK(s.histogram == ref.histogram);
        }
}

TEST_CASE("pairwise input errors") {
    auto m = random_embeddings(3, 4, 1);
    std::fill(m.values.begin(), m.values.begin() + 4, 0.0f);
    CHECK_THROWS_AS(pairwise_summary(m), InputError);
    CHECK_THROWS_AS(pairwise_summary(random_embeddings(1, 4, 1)), InputError);
    PairwiseOptions o;
    o.bins = 0;
    CHECK_THROWS_AS(pairwise_summary(random_embeddings(3, 4, 1), o), ConfigError);
}

TEST_CASE("threshold predictor flags datasets above the reference") {
    const auto v = threshold_predict(0.5, {{"a", 0.4}, {"b", 0.55}, {"c", 0.65}}, 0.1);
    CHECK(v.at("a") == ThresholdVerdict::expected_ok);
    CHECK(v.at("b") == ThresholdVerdict::expected_ok);
    CHECK(v.at("c") == ThresholdVerdict::expected_fail);
    CHECK(threshold_predict(0.5, {{"x", 0.51}}).at("x") == ThresholdVerdict::expected_fail);
    CHECK(to_string(ThresholdVerdict::expected_fail) != to_string(ThresholdVerdict::expected_ok));
}

TEST_CASE("probe gradient matches central finite differences") {
    auto [m, labels] = separable(40, 12, 5);
    const ProbeData d = probe_data(m, labels);
    SeedStream s(6, 0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> w(12);
        for (auto& v : w) v = s.normal();
        const double b = s.normal();
        std::vector<double> g;
        loss_and_gradient(d, w, b, &g);
        REQUIRE(g.size() == 13);
        const double h = 1e-5;
        for (std::size_t j = 0; j <= 12; ++j) {
            auto wp = w, wm = w;
            double bp = b, bm = b;
            if (j < 12) {
                wp[j] += h;
                wm[j] -= h;
            } else {
                bp += h;
                bm -= h;
            }
            const double fd = (loss_and_gradient(d, wp, bp, nullptr) - loss_and_gradient(d, wm, bm, nullptr)) / (2 * h);
            CHECK_THAT(g[j], WithinRel(fd, 1e-5) || WithinAbs(fd, 1e-9));
        }
    }
}

TEST_CASE("probe separates separable data and its loss falls") {
    auto [m, labels] = separable(200, 32, 7);
    const ProbeModel p = train_probe(m, labels);
    CHECK(p.loss_history.size() == 501);
    CHECK(p.loss_history.front() == Catch::Approx(std::log(2.0)));
    for (std::size_t e = 1; e < p.loss_history.size(); ++e) CHECK(p.loss_history[e] <= p.loss_history[e - 1] + 1e-12);
    const auto preds = probe_predict(p, m, "probe", 3);
    std::size_t right = 0;
    for (const auto& r : preds.rows) {
        right += r.predicted == labels.at(r.stimulus_id);
        CHECK(r.seed_id == 3);
        CHECK(r.logit_same.has_value());
        CHECK(r.score_same == Catch::Approx(1.0 / (1.0 + std::exp(-*r.logit_same))));
    }
    CHECK(right == 200);
}

TEST_CASE("probe input errors") {
    auto [m, labels] = separable(10, 4, 8);
    auto missing = labels;
    missing.erase(missing.begin());
    CHECK_THROWS_AS(probe_data(m, missing), InputError);
    auto extra = labels;
    extra["zzz"] = Label::same;
    CHECK_THROWS_AS(probe_data(m, extra), InputError);
    auto one_class = labels;
    for (auto& [_, l] : one_class) l = Label::same;
    CHECK_THROWS_AS(train_probe(m, one_class), InputError);
    ProbeHyper bad;
    bad.learning_rate = 0;
    CHECK_THROWS_AS(train_probe(m, labels, bad), ConfigError);
    const auto p = train_probe(m, labels);
    CHECK_THROWS_AS(probe_predict(p, random_embeddings(2, 5, 1)), InputError);
}

TEST_CASE("probe training is deterministic") {
    auto [m, labels] = separable(50, 8, 9);
    const auto a = train_probe(m, labels), b = train_probe(m, labels);
    CHECK(a.weights == b.weights);
    CHECK(a.bias == b.bias);
}
