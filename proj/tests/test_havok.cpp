#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "arcsim/errors.hpp"
#include "arcsim/havok.hpp"
#include "arcsim/rng.hpp"

using namespace arcsim;

namespace {

std::vector<double> sine(double freq, double dt, int n) {
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) {
        x[k] = std::sin(2.0 * kPi * freq * k * dt);
    }
    return x;
}

}  // namespace

TEST_CASE("hankel matrix layout") {
    std::vector<double> x(10);
    for (int k = 0; k < 10; ++k) x[k] = k;
    const Eigen::MatrixXd h = build_hankel(x, 3);
    CHECK(h.rows() == 3);
    CHECK(h.cols() == 8);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 8; ++j) {
            CHECK(h(i, j) == i + j);
        }
    }
}

TEST_CASE("hankel preconditions") {
    CHECK_THROWS_AS(build_hankel(std::vector<double>(7, 1.0), 4), decomposition_error);
    CHECK_THROWS_AS(build_hankel(std::vector<double>(100, 1.0), 1), decomposition_error);
}

TEST_CASE("decomposition of a constant trace") {
    const Eigen::MatrixXd h = build_hankel(std::vector<double>(16, 2.0), 4);
    const Decomposition d = decompose(h);
    CHECK(d.s(0) == doctest::Approx(2.0 * std::sqrt(4.0 * 13.0)).epsilon(1e-12));
    for (Eigen::Index i = 1; i < d.s.size(); ++i) {
        CHECK(d.s(i) == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("decomposition of the zero trace") {
    const Eigen::MatrixXd h = build_hankel(std::vector<double>(20, 0.0), 5);
    const Decomposition d = decompose(h);
    for (Eigen::Index i = 0; i < d.s.size(); ++i) {
        CHECK(d.s(i) == 0.0);
    }
}

TEST_CASE("a sinusoid concentrates in two singular values") {
    const Eigen::MatrixXd h = build_hankel(sine(5.0, 1e-3, 400), 40);
    const Decomposition d = decompose(h);
    CHECK((d.s(0) + d.s(1)) / d.s.sum() >= 0.99);
}

TEST_CASE("orthonormality, reconstruction, and sign determinism") {
    Rng rng(42);
    std::vector<double> x(500);
    for (double& v : x) v = rng.gaussian();
    const Eigen::MatrixXd h = build_hankel(x, 40);
    const Decomposition d = decompose(h);

    const Eigen::MatrixXd gram = d.u.transpose() * d.u;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <
          1e-10);
    const Eigen::MatrixXd rec = d.u * d.s.asDiagonal() * d.v.transpose();
    CHECK((rec - h).norm() / h.norm() < 1e-10);

    // Deterministic orientation: the largest-magnitude entry of every left
    // singular vector is positive, and repeated runs agree exactly.
    for (Eigen::Index c = 0; c < d.u.cols(); ++c) {
        Eigen::Index peak = 0;
        d.u.col(c).cwiseAbs().maxCoeff(&peak);
        CHECK(d.u(peak, c) > 0.0);
    }
    const Decomposition d2 = decompose(h);
    CHECK((d.u - d2.u).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.v - d2.v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-finite input is rejected, never silently decomposed") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Ones(4, 10);
    h(2, 3) = std::nan("");
    CHECK_THROWS_AS(decompose(h), decomposition_error);
    h(2, 3) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(decompose(h), decomposition_error);
}

TEST_CASE("threshold weight polynomial") {
    CHECK(spectral_threshold_weight(0.0) == doctest::Approx(1.43).epsilon(1e-12));
    CHECK(spectral_threshold_weight(1.0) == doctest::Approx(2.86).epsilon(1e-12));
}

TEST_CASE("rank selection") {
    SUBCASE("one dominant value clamps up to the floor of two") {
        Eigen::VectorXd s(2);
        s << 10.0, 1e-14;
        CHECK(select_rank(s, 2, 100) == 2);
    }
    SUBCASE("three signal values above a flat noise shelf") {
        Eigen::VectorXd s(40);
        for (int i = 0; i < 40; ++i) s(i) = 1e-9;
        s(0) = 5.0;
        s(1) = 3.0;
        s(2) = 2.0;
        CHECK(select_rank(s, 40, 1000) == 3);
    }
    SUBCASE("a flat spectrum has no values above the weighted median") {
        // The threshold weight is >= 1.43 for every aspect ratio, so a flat
        // spectrum leaves nothing above the cutoff and the clamp floor of 2
        // applies.
        Eigen::VectorXd s = Eigen::VectorXd::Constant(40, 7.0);
        CHECK(select_rank(s, 40, 1000) == 2);
    }
    SUBCASE("count is clamped to the spectrum length") {
        Eigen::VectorXd s(3);
        s << 5.0, 4.0, 3.0;
        CHECK(select_rank(s, 3, 1000) <= 3);
    }
}

TEST_CASE("five-point differentiation") {
    SUBCASE("exact on cubics") {
        const double dt = 0.1;
        Eigen::MatrixXd v(20, 1);
        for (int i = 0; i < 20; ++i) {
            const double t = i * dt;
            v(i, 0) = t * t * t - 2.0 * t * t + 3.0 * t - 1.0;
        }
        const Eigen::MatrixXd dv = differentiate(v, dt);
        CHECK(dv.rows() == 16);
        for (int i = 0; i < 16; ++i) {
            const double t = (i + 2) * dt;
            CHECK(dv(i, 0) == doctest::Approx(3.0 * t * t - 4.0 * t + 3.0).epsilon(1e-10));
        }
    }
    SUBCASE("fourth-order accurate on a sine") {
        const double dt = 0.01;
        Eigen::MatrixXd v(200, 1);
        for (int i = 0; i < 200; ++i) v(i, 0) = std::sin(i * dt);
        const Eigen::MatrixXd dv = differentiate(v, dt);
        double worst = 0.0;
        for (int i = 0; i < dv.rows(); ++i) {
            worst = std::max(worst, std::fabs(dv(i, 0) - std::cos((i + 2) * dt)));
        }
        CHECK(worst < 1e-8);
    }
    SUBCASE("too few rows are rejected") {
        CHECK_THROWS_AS(differentiate(Eigen::MatrixXd::Zero(4, 1), 0.1), decomposition_error);
    }
}

TEST_CASE("linear model identification") {
    const double dt = 0.01;
    const int n = 600;

    SUBCASE("recovers known dynamics") {
        // v1 = sin t, v2 = cos t, v3 = cos 3t, forcing vr = sin 3t:
        // dv1 = v2, dv2 = -v1, dv3 = -3 vr.
        Eigen::MatrixXd v(n, 4);
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            v(i, 0) = std::sin(t);
            v(i, 1) = std::cos(t);
            v(i, 2) = std::cos(3.0 * t);
            v(i, 3) = std::sin(3.0 * t);
        }
        const LinearModel m = identify(v, dt, 4);
        Eigen::MatrixXd a_ref(3, 3);
        a_ref << 0, 1, 0, -1, 0, 0, 0, 0, 0;
        Eigen::VectorXd b_ref(3);
        b_ref << 0, 0, -3;
        CHECK((m.a - a_ref).cwiseAbs().maxCoeff() < 1e-3);
        CHECK((m.b - b_ref).cwiseAbs().maxCoeff() < 1e-3);
    }
    SUBCASE("exactly zero states give the zero model") {
        const LinearModel m = identify(Eigen::MatrixXd::Zero(n, 3), dt, 3);
        CHECK(m.a.isZero(0.0));
        CHECK(m.b.isZero(0.0));
        CHECK(m.residual == 0.0);
    }
    SUBCASE("rank-deficient regressors raise a condition diagnostic") {
        Eigen::MatrixXd v(n, 3);
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            v(i, 0) = std::sin(t);
            v(i, 1) = std::sin(t);  // duplicate column
            v(i, 2) = std::cos(t);
        }
        CHECK_THROWS_WITH_AS(identify(v, dt, 3),
                             doctest::Contains("condition"), decomposition_error);
    }
}

TEST_CASE("forcing signal of a plain sinusoid is unremarkable") {
    const ForcingSignal f = forcing_signal(sine(50.0, 5e-5, 4000), 5e-5, 0.0, 40);

    double norm = 0.0;
    double peak = 0.0;
    std::vector<double> mags;
    for (double v : f.values) {
        norm += v * v;
        peak = std::max(peak, std::fabs(v));
        mags.push_back(std::fabs(v));
    }
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-10));

    std::sort(mags.begin(), mags.end());
    const double median = 0.5 * (mags[mags.size() / 2 - 1] + mags[mags.size() / 2]);
    CHECK(peak / median < 20.0);

    for (std::size_t j = 1; j < f.time.size(); ++j) {
        CHECK(f.time[j] > f.time[j - 1]);
    }
    CHECK(f.time[0] == 0.0);
    CHECK(f.time[1] == doctest::Approx(5e-5).epsilon(1e-12));
}

TEST_CASE("forcing signal stamps window-start times with an offset") {
    const ForcingSignal f = forcing_signal(sine(50.0, 5e-5, 400), 5e-5, 1.5, 40);
    CHECK(f.time[0] == 1.5);
    CHECK(f.time.back() == doctest::Approx(1.5 + (400 - 40) * 5e-5).epsilon(1e-9));
}

TEST_CASE("reconstruction tail equals the discarded spectrum") {
    Rng rng(9);
    std::vector<double> x(400);
    for (double& v : x) v = rng.gaussian();
    const Eigen::MatrixXd h = build_hankel(x, 20);
    const Decomposition d = decompose(h);
    const int r = 5;
    const Eigen::MatrixXd rec =
        d.u.leftCols(r) * d.s.head(r).asDiagonal() * d.v.leftCols(r).transpose();
    double tail = 0.0;
    for (Eigen::Index i = r; i < d.s.size(); ++i) tail += d.s(i) * d.s(i);
    CHECK((h - rec).norm() ==
          doctest::Approx(std::sqrt(tail)).epsilon(1e-9));
}

TEST_CASE("rank-reduced dynamics of a sinusoid close under the linear model") {
    // Koopman-style check: a pure oscillation lives in the first two delay
    // coordinates, so a low-rank linear model reproduces their derivatives
    // with a misfit far below the derivative magnitude.  (The data is
    // noiseless, so the automatic rank cut has no noise shelf to anchor to;
    // the oscillator subspace is pinned explicitly.)
    const std::vector<double> x = sine(5.0, 1e-3, 1000);
    const Eigen::MatrixXd h = build_hankel(x, 40);
    const Decomposition d = decompose(h);
    const int r = 3;
    const LinearModel m = identify(d.v, 1e-3, r);
    const Eigen::MatrixXd dv = differentiate(d.v.leftCols(r), 1e-3);
    CHECK(m.residual / dv.leftCols(r - 1).norm() < 0.05);
}

TEST_CASE("model report formatting") {
    const ModelReport rep = analyze(sine(5.0, 1e-3, 400), 1e-3, 40);
    const std::string text = format_model_report(rep);
    CHECK(text.find("rank=") != std::string::npos);
    CHECK(text.find("spectrum=") != std::string::npos);
    CHECK(text.find("A[0]=") != std::string::npos);
    CHECK(text.find("B=") != std::string::npos);
    CHECK(text.find("residual=") != std::string::npos);
}

TEST_CASE("forcing csv export") {
    const ForcingSignal f = forcing_signal(sine(50.0, 5e-5, 400), 5e-5, 0.0, 40);
    const std::string path = "forcing_test.csv";
    write_csv(f, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "time_s,v_r");
    std::remove(path.c_str());
}
