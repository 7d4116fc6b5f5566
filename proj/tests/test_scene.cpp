#include <doctest.h>

#include <cmath>
#include <set>

#include "splnc/error.hpp"
#include "splnc/features.hpp"
#include "splnc/rng.hpp"
#include "splnc/scene.hpp"

using namespace splnc;

namespace {

bool same(const CoherencyMatrix& a, const CoherencyMatrix& b, double tol) {
    return std::abs(a.t11 - b.t11) <= tol && std::abs(a.t22 - b.t22) <= tol && std::abs(a.t33 - b.t33) <= tol &&
           std::abs(a.t12 - b.t12) <= tol && std::abs(a.t13 - b.t13) <= tol && std::abs(a.t23 - b.t23) <= tol;
}

// Symmetric Wishart distance between two covariances.
double symmetric_distance(const CoherencyMatrix& a, const CoherencyMatrix& b) {
    const auto ia = hermitian_inverse(a), ib = hermitian_inverse(b);
    const double t1 = mat_trace(mat_mul(ia, b.to_matrix())).real();
    const double t2 = mat_trace(mat_mul(ib, a.to_matrix())).real();
    return 0.5 * (t1 + t2) - 3.0;
}

}  // namespace

TEST_CASE("generator streams") {
    Rng a(7, 0), b(7, 0), c(7, 1), d(8, 0);
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());

    Rng u(1, 2);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = u.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.02);

    std::array<int, 7> counts{};
    for (int i = 0; i < 70000; ++i) ++counts[u.uniform_int(7)];
    for (int cnt : counts) CHECK(std::abs(cnt - 10000) < 500);
    for (int i = 0; i < 1000; ++i) {
        const double r = u.uniform();
        CHECK(r >= 0.0);
        CHECK(r < 1.0);
    }
}

TEST_CASE("class covariance blends") {
    const auto s1 = builtin_class_sigmas(5, 1.0);
    for (const auto& s : s1) CHECK(same(s, s1[0], 1e-15));
    const auto s0 = builtin_class_sigmas(5, 0.0);
    for (int k = 0; k < 5; ++k) CHECK(same(s0[k], prototype_sigma(k), 0.0));
    const auto half = builtin_class_sigmas(4, 0.5);
    CoherencyMatrix mean{};
    for (int k = 0; k < 4; ++k) mean += prototype_sigma(k);
    mean *= 0.25;
    for (int k = 0; k < 4; ++k) {
        const auto want = 0.5 * prototype_sigma(k) + 0.5 * mean;
        CHECK(same(half[k], want, 1e-15));
    }
    try {
        builtin_class_sigmas(3, 1.5);
        FAIL("expected BadSimilarity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadSimilarity);
    }
}

TEST_CASE("prototype blends stay positive definite") {
    for (int k = 2; k <= kPrototypeCount; ++k)
        for (double s = 0.0; s <= 1.0; s += 0.05)
            for (const auto& sig : builtin_class_sigmas(k, s)) {
                const auto es = eig3_hermitian(sig);
                CHECK(es.values[2] > 0.0);
            }
}

TEST_CASE("separability does not grow with similarity") {
    double prev = std::numeric_limits<double>::infinity();
    for (double s = 0.0; s <= 1.0 + 1e-12; s += 0.1) {
        const auto sig = builtin_class_sigmas(kPrototypeCount, std::min(s, 1.0));
        double sum = 0.0;
        int pairs = 0;
        for (std::size_t a = 0; a < sig.size(); ++a)
            for (std::size_t b = a + 1; b < sig.size(); ++b) {
                sum += symmetric_distance(sig[a], sig[b]);
                ++pairs;
            }
        const double mean = sum / pairs;
        CHECK(mean <= prev + 1e-12);
        prev = mean;
    }
    CHECK(prev == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("cholesky") {
    const auto sig = prototype_sigma(2);
    const auto l = cholesky(sig);
    Matrix3c llh{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) llh[i][j] += l[i][k] * std::conj(l[j][k]);
    CHECK(frobenius_norm(mat_sub(llh, sig.to_matrix())) < 1e-12);
    try {
        cholesky(CoherencyMatrix::diagonal(1.0, 0.0, 1.0));
        FAIL("expected NotPositiveDefinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    }
}

TEST_CASE("single look draws are rank one") {
    Rng rng(3, 0);
    for (int i = 0; i < 20; ++i) {
        const auto t = sample_wishart_coherency(CoherencyMatrix::identity(), 1, rng);
        const auto es = eig3_hermitian(t);
        CHECK(std::abs(es.values[1]) <= 1e-12 * es.values[0] + 1e-12);
        CHECK(std::abs(es.values[2]) <= 1e-12 * es.values[0] + 1e-12);
    }
}

TEST_CASE("layouts") {
    SceneSpec spec;
    spec.width = spec.height = 4;
    spec.classes = 2;
    spec.layout = Layout::stripes;
    const auto l = layout_labels(spec);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(l[y * 4 + x] == (y < 2 ? 1 : 2));

    spec.width = spec.height = 40;
    spec.classes = 5;
    spec.layout = Layout::blocks;
    const auto b = layout_labels(spec);
    CHECK(std::set<int>(b.begin(), b.end()).size() == 5);

    spec.layout = Layout::voronoi;
    spec.voronoi_seeds = 10;
    const auto v = layout_labels(spec);
    for (int x : v) {
        CHECK(x >= 1);
        CHECK(x <= 5);
    }
    CHECK(layout_labels(spec) == v);
}

TEST_CASE("scene generation is deterministic") {
    SceneSpec spec;
    spec.width = spec.height = 16;
    spec.seed = 9;
    const auto a = generate_scene(spec);
    const auto b = generate_scene(spec);
    CHECK(a.labels == b.labels);
    CHECK(a.coherency == b.coherency);
    for (auto s : a.splits) CHECK(s == Split::test);
    spec.seed = 10;
    CHECK(generate_scene(spec).coherency != a.coherency);
}

TEST_CASE("per-class scene means match the class covariances") {
    SceneSpec spec;
    spec.width = spec.height = 128;
    spec.classes = 4;
    spec.layout = Layout::stripes;
    spec.similarity = 0.3;
    spec.seed = 4;
    const auto ds = generate_scene(spec);
    const auto sig = builtin_class_sigmas(4, 0.3);
    for (int k = 1; k <= 4; ++k) {
        std::vector<double> t11, re12;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds.labels[i] == k) {
                t11.push_back(ds.coherency[i].t11);
                re12.push_back(ds.coherency[i].t12.real());
            }
        for (auto [vals, want] : {std::pair{&t11, sig[k - 1].t11}, std::pair{&re12, sig[k - 1].t12.real()}}) {
            double m = 0.0, v = 0.0;
            for (double x : *vals) m += x;
            m /= vals->size();
            for (double x : *vals) v += (x - m) * (x - m);
            const double se = std::sqrt(v / (vals->size() - 1) / vals->size());
            CHECK(std::abs(m - want) <= 3.0 * se);
        }
    }
}

TEST_CASE("fewer looks means noisier entropy") {
    auto entropy_variance = [](int looks) {
        Rng rng(17, 0);
        const auto sig = prototype_sigma(3);
        std::vector<double> h;
        for (int i = 0; i < 2000; ++i) h.push_back(feature_vector(sample_wishart_coherency(sig, looks, rng))[4]);
        double m = 0.0, v = 0.0;
        for (double x : h) m += x;
        m /= h.size();
        for (double x : h) v += (x - m) * (x - m);
        return v / h.size();
    };
    // A single look is rank one, so H is identically zero there; two looks is
    // the noisiest case with a spread of entropies. The gap is several-fold,
    // so a factor of 2 leaves ample margin.
    CHECK(entropy_variance(1) < 1e-20);
    CHECK(entropy_variance(2) > 2.0 * entropy_variance(8));
}

TEST_CASE("training masks") {
    SceneSpec spec;
    spec.width = spec.height = 32;
    spec.classes = 3;
    spec.layout = Layout::stripes;
    spec.seed = 2;

    SUBCASE("fraction one with single pixels takes everything") {
        auto ds = generate_scene(spec);
        Rng rng(1, 5);
        sample_training_mask(ds, 1.0, 1, rng);
        for (auto s : ds.splits) CHECK(s == Split::train);
    }
    SUBCASE("blocks lie inside one class and reach the target") {
        auto ds = generate_scene(spec);
        Rng rng(1, 5);
        sample_training_mask(ds, 0.05, 3, rng);
        for (int cls = 1; cls <= 3; ++cls) {
            const auto total = std::count(ds.labels.begin(), ds.labels.end(), cls);
            std::size_t train = 0;
            for (std::size_t i = 0; i < ds.size(); ++i) train += ds.labels[i] == cls && ds.splits[i] == Split::train;
            CHECK(train >= 0.05 * total);
            CHECK(train < 0.05 * total + 9);
        }
        auto again = generate_scene(spec);
        Rng rng2(1, 5);
        sample_training_mask(again, 0.05, 3, rng2);
        CHECK(again.splits == ds.splits);
    }
    SUBCASE("unlabeled pixels never train") {
        auto ds = generate_scene(spec);
        for (std::size_t i = 0; i < 32; ++i) ds.labels[i] = 0;
        Rng rng(1, 5);
        sample_training_mask(ds, 0.1, 2, rng);
        for (std::size_t i = 0; i < 32; ++i) CHECK(ds.splits[i] == Split::none);
    }
    SUBCASE("argument checks") {
        auto ds = generate_scene(spec);
        Rng rng(1, 5);
        CHECK_THROWS_AS(sample_training_mask(ds, 0.0, 3, rng), Error);
        CHECK_THROWS_AS(sample_training_mask(ds, 0.1, 0, rng), Error);
    }
}

TEST_CASE("large mask stays within one block of two percent") {
    // 96 x 1747 = 167712 labeled pixels in three horizontal classes.
    GridDataset ds;
    ds.width = 96;
    ds.height = 1747;
    ds.labels.resize(static_cast<std::size_t>(ds.width) * ds.height);
    for (int y = 0; y < ds.height; ++y)
        for (int x = 0; x < ds.width; ++x) ds.labels[ds.index(x, y)] = 1 + y * 3 / ds.height;
    ds.splits.assign(ds.labels.size(), Split::test);
    Rng rng(11, 0);
    sample_training_mask(ds, 0.02, 3, rng);
    const auto train = ds.training_count();
    CHECK(ds.labels.size() == 167712);
    CHECK(train >= 3354);
    CHECK(train <= 3354 + 3 * 9);
    CHECK(ds.training_fraction() == doctest::Approx(0.02).epsilon(0.2));
}
