#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "splnc/baselines.hpp"
#include "splnc/error.hpp"
#include "splnc/scene.hpp"

using namespace splnc;

namespace {

GridDataset tiny(const std::vector<CoherencyMatrix>& t, const std::vector<int>& labels) {
    GridDataset ds;
    ds.width = static_cast<int>(t.size());
    ds.height = 1;
    ds.coherency = t;
    ds.labels = labels;
    ds.splits.assign(t.size(), Split::train);
    return ds;
}

double brute_distance(const CoherencyMatrix& t, const CoherencyMatrix& sigma) {
    const Matrix3c inv = hermitian_inverse(sigma);
    return std::log(hermitian_det(sigma)) + mat_trace(mat_mul(inv, t.to_matrix())).real();
}

}  // namespace

TEST_CASE("wishart centers are class means") {
    SUBCASE("single pixel") {
        const auto t = CoherencyMatrix{2.0, 1.0, 0.5, {0.1, 0.2}, {0.0, -0.1}, {0.05, 0.0}};
        const auto c = wishart_centers(tiny({t, CoherencyMatrix::identity()}, {1, 2}));
        CHECK(c.centers[0].sigma == t);
    }
    SUBCASE("two diagonal pixels") {
        const auto c = wishart_centers(
            tiny({CoherencyMatrix::identity(), CoherencyMatrix::diagonal(3, 3, 3), CoherencyMatrix::identity()}, {1, 1, 2}));
        CHECK(c.centers[0].sigma == CoherencyMatrix::diagonal(2, 2, 2));
        CHECK(c.centers[0].class_id == 1);
        CHECK(c.centers[1].class_id == 2);
    }
    SUBCASE("random sets") {
        std::mt19937_64 g(51);
        std::vector<CoherencyMatrix> t;
        std::vector<int> labels;
        for (int i = 0; i < 60; ++i) {
            t.push_back(testing_support::random_psd(g));
            labels.push_back(1 + i % 3);
        }
        const auto c = wishart_centers(tiny(t, labels));
        for (int k = 0; k < 3; ++k) {
            CoherencyMatrix m{};
            int n = 0;
            for (std::size_t i = 0; i < t.size(); ++i)
                if (labels[i] == k + 1) {
                    m += t[i];
                    ++n;
                }
            m *= 1.0 / n;
            const auto& s = c.centers[k].sigma;
            CHECK(std::abs(s.t11 - m.t11) <= 1e-12);
            CHECK(std::abs(s.t23 - m.t23) <= 1e-12);
            const auto prod = mat_mul(s.to_matrix(), c.centers[k].inverse);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) CHECK(std::abs(prod[i][j] - (i == j ? 1.0 : 0.0)) <= 1e-8);
        }
    }
}

TEST_CASE("wishart center errors and regularization") {
    auto ds = tiny({CoherencyMatrix::identity(), CoherencyMatrix::identity()}, {1, 2});
    ds.splits[1] = Split::test;
    try {
        wishart_centers(ds);
        FAIL("expected EmptyClass");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyClass);
    }
    // A rank-one mean gets a small ridge instead of failing.
    const auto c = make_wishart_center(1, CoherencyMatrix::diagonal(1.0, 0.0, 0.0));
    CHECK(std::isfinite(c.log_det));
    try {
        make_wishart_center(1, CoherencyMatrix{});
        FAIL("expected SingularCenter");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularCenter);
    }
}

TEST_CASE("wishart distance and classification") {
    const auto id = make_wishart_center(1, CoherencyMatrix::identity());
    CHECK(wishart_distance(CoherencyMatrix::identity(), id) == doctest::Approx(3.0).epsilon(1e-14));

    WishartCenters two;
    two.centers = {make_wishart_center(4, CoherencyMatrix::identity()), make_wishart_center(2, CoherencyMatrix::identity())};
    // Equal distances: the lower class id wins regardless of storage order.
    CHECK(wishart_classify(CoherencyMatrix::identity(), two) == 2);

    WishartCenters far;
    for (int k = 0; k < 5; ++k) far.centers.push_back(make_wishart_center(k + 1, prototype_sigma(k)));
    for (int k = 0; k < 5; ++k) CHECK(wishart_classify(prototype_sigma(k), far) == k + 1);

    std::mt19937_64 g(52);
    for (int i = 0; i < 300; ++i) {
        const auto t = testing_support::random_psd(g);
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (const auto& c : far.centers) {
            const double d = brute_distance(t, c.sigma);
            if (d < bd) {
                bd = d;
                best = c.class_id;
            }
        }
        CHECK(wishart_classify(t, far) == best);
    }
}

TEST_CASE("plain svm on a separable scene") {
    SceneSpec spec;
    spec.width = spec.height = 20;
    spec.classes = 3;
    spec.layout = Layout::stripes;
    spec.similarity = 0.0;
    spec.looks = 16;
    auto ds = generate_scene(spec);
    Rng rng(3, 1);
    sample_training_mask(ds, 0.1, 2, rng);
    TrainerConfig cfg;
    cfg.c = 50;
    cfg.tol = 1e-5;
    const auto m = train_plain_svm(ds, cfg);
    const auto pred = predict(m, ds);
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.splits[i] == Split::train) CHECK(pred[i] == ds.labels[i]);
    CHECK(predict(train_plain_svm(ds, cfg), ds) == pred);
}
