#include <doctest.h>

#include "hybridpf/dataset.hpp"
#include "hybridpf/errors.hpp"
#include "hybridpf/sarimax.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

using namespace hybridpf;

namespace {

std::string write_fixture(const std::string& name, const std::string& content) {
    const std::string path = "fixture_" + name;
    std::ofstream out(path);
    out << content;
    out.close();
    return path;
}

double autocorrelation(const std::vector<double>& y, int lag) {
    const int n = static_cast<int>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double num = 0.0, den = 0.0;
    for (int t = 0; t < n; ++t) {
        den += (y[static_cast<std::size_t>(t)] - mean) * (y[static_cast<std::size_t>(t)] - mean);
        if (t + lag < n) {
            num += (y[static_cast<std::size_t>(t)] - mean) *
                   (y[static_cast<std::size_t>(t + lag)] - mean);
        }
    }
    return num / den;
}

} // namespace

TEST_CASE("csv loader reads target and exogenous columns") {
    const std::string path = write_fixture("basic.csv",
                                           "t,y,x\n"
                                           "1,10.5,0.1\n"
                                           "2,11.0,0.2\n"
                                           "3,12.5,0.3\n");
    const Dataset data = load_csv(path, "y", {"x"});
    REQUIRE(data.size() == 3);
    CHECK(data.target[0] == 10.5);
    CHECK(data.target[2] == 12.5);
    REQUIRE(data.n_exog() == 1);
    CHECK(data.exog(1, 0) == 0.2);
}

TEST_CASE("csv loader with no exogenous columns") {
    const std::string path = write_fixture("target_only.csv", "y\n1\n2\n3\n4\n");
    const Dataset data = load_csv(path, "y", {});
    CHECK(data.size() == 4);
    CHECK(data.n_exog() == 0);
}

TEST_CASE("csv loader rejects bad cells with their row number") {
    const std::string nan_path = write_fixture("nan.csv", "y\n1\nNaN\n3\n");
    CHECK_THROWS_WITH_AS(load_csv(nan_path, "y", {}),
                         doctest::Contains("row 3"), DataError);

    const std::string text_path = write_fixture("text.csv", "y\n1\noops\n");
    CHECK_THROWS_WITH_AS(load_csv(text_path, "y", {}),
                         doctest::Contains("cannot parse 'oops'"), DataError);

    const std::string ragged_path = write_fixture("ragged.csv", "y,x\n1,2\n3\n");
    CHECK_THROWS_AS(load_csv(ragged_path, "y", {"x"}), DataError);

    const std::string ok_path = write_fixture("ok.csv", "y\n1\n");
    CHECK_THROWS_AS(load_csv(ok_path, "z", {}), DataError);
    CHECK_THROWS_AS(load_csv("no_such_file.csv", "y", {}), DataError);
}

TEST_CASE("competition-layout loader splits train and test by id") {
    std::string train = "id,V1,V2,V3,V4,V5,V6,V7,V8\n";
    train += "Y1,100,101,102,103,,,,\n";
    train += "D1,5,6,7,8,9,10,,\n";
    std::string hourly_train = "H1";
    for (int i = 0; i < 96; ++i) hourly_train += "," + std::to_string(20 + (i % 24));
    train += hourly_train + "\n";

    std::string test = "id\n";
    test += "Y1,104,105,106,107,108,109\n";
    std::string daily_test = "D1";
    for (int i = 0; i < 14; ++i) daily_test += "," + std::to_string(11 + i);
    test += daily_test + "\n";
    std::string hourly_test = "H1";
    for (int i = 0; i < 48; ++i) hourly_test += "," + std::to_string(20 + (i % 24));
    test += hourly_test + ",,,\n"; // ragged padding after the horizon

    const std::string train_path = write_fixture("m4_train.csv", train);
    const std::string test_path = write_fixture("m4_test.csv", test);

    const auto hourly = load_m4_pair(train_path, test_path, "H1");
    CHECK(hourly.first.size() == 96);
    CHECK(hourly.second.size() == 48);
    CHECK(hourly.first.n_exog() == 0);

    const auto daily = load_m4_pair(train_path, test_path, "D1");
    CHECK(daily.first.size() == 6);
    CHECK(daily.second.size() == 14);

    const auto yearly = load_m4_pair(train_path, test_path, "Y1");
    CHECK(yearly.first.size() == 4);
    CHECK(yearly.second.size() == 6);
    CHECK(yearly.first.target[3] == 103.0);
    CHECK(yearly.second.target[5] == 109.0);

    CHECK_THROWS_WITH_AS(load_m4_pair(train_path, test_path, "W9"),
                         doctest::Contains("series id 'W9' not found"), DataError);

    const std::string empty_path = write_fixture("m4_empty.csv", "Z1,,,\n");
    CHECK_THROWS_WITH_AS(load_m4_pair(empty_path, empty_path, "Z1"),
                         doctest::Contains("has no values"), DataError);
}

TEST_CASE("linear generator is deterministic and stable-only") {
    SarimaxSpec spec;
    spec.p = 1;
    SynthCoeffs coeffs;
    coeffs.phi = {0.7};
    const SynthResult a = synth_sarimax(spec, coeffs, 0.1, 300, 9);
    const SynthResult b = synth_sarimax(spec, coeffs, 0.1, 300, 9);
    CHECK(a.data.target == b.data.target);
    CHECK(a.conditional_mean == b.conditional_mean);

    const SynthResult c = synth_sarimax(spec, coeffs, 0.1, 300, 10);
    CHECK(a.data.target != c.data.target);

    coeffs.phi = {1.5};
    CHECK_THROWS_WITH_AS(synth_sarimax(spec, coeffs, 0.1, 300, 9),
                         doctest::Contains("unstable"), ConfigError);
}

TEST_CASE("order-zero generator emits white noise") {
    const SynthResult synth = synth_sarimax(SarimaxSpec{}, SynthCoeffs{}, 1.0, 2000, 21);
    const double r1 = autocorrelation(synth.data.target, 1);
    CHECK(std::abs(r1) < 3.0 / std::sqrt(2000.0));
    for (double mu : synth.conditional_mean) CHECK(mu == 0.0);
}

TEST_CASE("generator means reproduce the ARMA recursion") {
    SarimaxSpec spec;
    spec.p = 1;
    spec.q = 1;
    SynthCoeffs coeffs;
    coeffs.phi = {0.7};
    coeffs.theta = {0.3};
    const SynthResult synth = synth_sarimax(spec, coeffs, 0.1, 500, 33);
    const auto& y = synth.data.target;
    const auto& mu = synth.conditional_mean;
    REQUIRE(mu.size() == y.size());
    CHECK(mu[0] == 0.0);
    std::vector<double> eps(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) eps[t] = y[t] - mu[t];
    for (std::size_t t = 1; t < y.size(); ++t) {
        CHECK(mu[t] == doctest::Approx(0.7 * y[t - 1] + 0.3 * eps[t - 1]).epsilon(1e-12));
    }
}

TEST_CASE("predicting with the generator means hits the noise floor") {
    SarimaxSpec spec;
    spec.p = 2;
    spec.q = 1;
    SynthCoeffs coeffs;
    coeffs.phi = {0.5, 0.2};
    coeffs.theta = {-0.4};
    const double sigma = 0.3;
    const SynthResult synth = synth_sarimax(spec, coeffs, sigma, 4000, 77);
    double sse = 0.0;
    for (std::size_t t = 0; t < synth.data.target.size(); ++t) {
        const double e = synth.data.target[t] - synth.conditional_mean[t];
        sse += e * e;
    }
    const double mse = sse / static_cast<double>(synth.data.target.size());
    CHECK(mse >= 0.9 * sigma * sigma);
    CHECK(mse <= 1.1 * sigma * sigma);
}

TEST_CASE("differenced generator means align with the differenced series") {
    SarimaxSpec spec;
    spec.p = 1;
    spec.d = 1;
    SynthCoeffs coeffs;
    coeffs.phi = {0.6};
    const double sigma = 0.2;
    const SynthResult synth = synth_sarimax(spec, coeffs, sigma, 3000, 15);
    const auto w = difference(synth.data.target, 1, 0, 1);
    REQUIRE(w.size() + 1 == synth.conditional_mean.size());
    double sse = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        const double e = w[t] - synth.conditional_mean[t + 1];
        sse += e * e;
    }
    const double mse = sse / static_cast<double>(w.size());
    CHECK(mse >= 0.9 * sigma * sigma);
    CHECK(mse <= 1.1 * sigma * sigma);
}

TEST_CASE("seasonal nonlinear fixture") {
    const Dataset a = synth_hybrid(2000, 24, 11);
    CHECK(a.size() == 2000);
    CHECK(a.n_exog() == 2);
    REQUIRE(a.period_hint.has_value());
    CHECK(*a.period_hint == 24);

    const Dataset b = synth_hybrid(2000, 24, 11);
    CHECK(a.target == b.target);
    const Dataset c = synth_hybrid(2000, 24, 12);
    CHECK(a.target != c.target);
    CHECK(c.size() == 2000);
    CHECK(c.n_exog() == 2);

    CHECK_THROWS_AS(synth_hybrid(96, 24, 1), ConfigError);
}

TEST_CASE("seasonal fixture autocorrelation peaks at its period") {
    const Dataset data = synth_hybrid(2000, 24, 11);
    const double r24 = autocorrelation(data.target, 24);
    double best_other = -2.0;
    for (int lag = 12; lag <= 36; ++lag) {
        if (lag == 24) continue;
        best_other = std::max(best_other, autocorrelation(data.target, lag));
    }
    CHECK(r24 > best_other);
    CHECK(r24 > 0.5);
}

TEST_CASE("noise-free fixture reconstructs from its own drivers") {
    const int m = 8;
    const int T = 64;
    const Dataset data = synth_hybrid(T, m, 5, 0.0);
    std::vector<double> lin(static_cast<std::size_t>(T), 0.0);
    for (int t = 0; t < T; ++t) {
        const double x1 = data.exog(t, 0);
        const double x2_prev = t > 0 ? data.exog(t - 1, 1) : 0.0;
        const double x1_prev = t > 0 ? data.exog(t - 1, 0) : 0.0;
        double v = x1;
        if (t >= 1) v += 0.5 * lin[static_cast<std::size_t>(t - 1)];
        if (t >= m) v += 0.3 * lin[static_cast<std::size_t>(t - m)];
        lin[static_cast<std::size_t>(t)] = v;
        const double nonlin = 0.8 * std::tanh(2.0 * x1_prev * x2_prev) + 0.4 * x2_prev * x2_prev;
        CHECK(data.target[static_cast<std::size_t>(t)] ==
              doctest::Approx(v + nonlin).epsilon(1e-12));
    }
}
