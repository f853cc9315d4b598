#include "hybridpf/errors.hpp"
#include "hybridpf/sarimax.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace hybridpf;

TEST_CASE("lag buffer serves recent values newest-first and zero-fills") {
    LagBuffer buf(3);
    CHECK(buf.lag(1) == 0.0);
    buf.push(1.0);
    buf.push(2.0);
    CHECK(buf.lag(1) == 2.0);
    CHECK(buf.lag(2) == 1.0);
    CHECK(buf.lag(3) == 0.0); // not yet filled
    buf.push(3.0);
    buf.push(4.0); // evicts 1.0
    CHECK(buf.lag(1) == 4.0);
    CHECK(buf.lag(2) == 3.0);
    CHECK(buf.lag(3) == 2.0);
    CHECK(buf.lag(4) == 0.0); // beyond capacity
    CHECK_THROWS_AS(buf.lag(0), ConfigError);
}

TEST_CASE("zero-capacity lag buffer drops pushes") {
    LagBuffer buf(0);
    buf.push(7.0);
    CHECK(buf.size() == 0);
    CHECK(buf.lag(1) == 0.0);
}

TEST_CASE("ordinary differencing") {
    CHECK(difference({1.0, 2.0, 4.0}, 1, 0, 1) == std::vector<double>{1.0, 2.0});
    CHECK(difference({5.0, 5.0, 5.0, 5.0}, 0, 1, 2) == std::vector<double>{0.0, 0.0});
    CHECK(difference({3.0, 1.0}, 0, 0, 1) == std::vector<double>{3.0, 1.0});
    CHECK_THROWS_AS(difference({1.0, 2.0}, 2, 0, 1), ConfigError);
    CHECK_THROWS_AS(difference({1.0}, 1, 0, 1), DataError);
    CHECK_THROWS_AS(difference({1.0, 2.0, 3.0}, 0, 1, 4), DataError);
}

TEST_CASE("undifferencing a single prediction") {
    CHECK(undifference(2.0, {1.0, 4.0}, 1, 0, 1) == 6.0);
    CHECK(undifference(2.0, {}, 0, 0, 1) == 2.0);
    CHECK_THROWS_AS(undifference(2.0, {1.0}, 1, 1, 2), DataError);
}

TEST_CASE("difference then stepwise undifference reconstructs the series") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> dist;
    std::vector<double> y(80);
    for (auto& v : y) {
        v = dist(rng);
    }
    for (int d = 0; d <= 1; ++d) {
        for (int D = 0; D <= 1; ++D) {
            for (int m : {2, 4, 12}) {
                const auto w = difference(y, d, D, m);
                const int drop = d + D * m;
                REQUIRE(w.size() == y.size() - static_cast<std::size_t>(drop));
                for (std::size_t t = 0; t < w.size(); ++t) {
                    const std::vector<double> head(y.begin(),
                                                   y.begin() + static_cast<long>(t) + drop);
                    const double rebuilt = undifference(w[t], head, d, D, m);
                    CHECK(rebuilt == doctest::Approx(y[t + static_cast<std::size_t>(drop)])
                                         .epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("regressor assembles lags, shocks, then drivers") {
    SarimaxSpec spec;
    spec.p = 2;
    spec.q = 1;
    spec.n_exog = 1;

    HistoryBuffer hist(spec.max_ar_lag());
    ResidualBuffer res(spec.max_ma_lag());
    hist.push(5.0);
    hist.push(3.0); // most recent
    res.push(0.2);

    Vector exog(1);
    exog << 7.0;
    const Vector r = build_regressor(hist, res, exog, spec);
    REQUIRE(r.size() == 4);
    CHECK(r(0) == 3.0);
    CHECK(r(1) == 5.0);
    CHECK(r(2) == 0.2);
    CHECK(r(3) == 7.0);
}

TEST_CASE("regressor covers seasonal lags") {
    SarimaxSpec spec;
    spec.p = 1;
    spec.P = 1;
    spec.q = 0;
    spec.Q = 1;
    spec.period = 3;

    HistoryBuffer hist(spec.max_ar_lag());
    ResidualBuffer res(spec.max_ma_lag());
    for (double v : {1.0, 2.0, 3.0}) {
        hist.push(v);
    }
    for (double v : {0.1, 0.2, 0.3}) {
        res.push(v);
    }
    const Vector r = build_regressor(hist, res, Vector(0), spec);
    REQUIRE(r.size() == 3);
    CHECK(r(0) == 3.0); // y lag 1
    CHECK(r(1) == 1.0); // y lag m = 3
    CHECK(r(2) == 0.1); // shock lag m = 3
}

TEST_CASE("warm-up lags read zero inside the regressor") {
    SarimaxSpec spec;
    spec.p = 3;
    HistoryBuffer hist(spec.max_ar_lag());
    ResidualBuffer res(0);
    hist.push(4.0);
    const Vector r = build_regressor(hist, res, Vector(0), spec);
    CHECK(r(0) == 4.0);
    CHECK(r(1) == 0.0);
    CHECK(r(2) == 0.0);
}

TEST_CASE("regressor rejects a driver width mismatch") {
    SarimaxSpec spec;
    spec.n_exog = 2;
    HistoryBuffer hist(0);
    ResidualBuffer res(0);
    CHECK_THROWS_AS(build_regressor(hist, res, Vector::Zero(1), spec), ConfigError);
}

TEST_CASE("recording a step stores the value and its residual") {
    HistoryBuffer hist(2);
    ResidualBuffer res(2);
    record_step(res, hist, 5.0, 4.25);
    CHECK(hist.lag(1) == 5.0);
    CHECK(res.lag(1) == doctest::Approx(0.75).epsilon(1e-15));
}
