#include "hybridpf/errors.hpp"
#include "hybridpf/packing.hpp"

#include <doctest.h>

#include <random>

using namespace hybridpf;

namespace {

RnnParams random_params(const RnnSpec& spec, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    RnnParams p;
    const int cols = spec.hidden_size + spec.input_size;
    for (int g = 0; g < spec.gate_count(); ++g) {
        Matrix w(spec.hidden_size, cols);
        for (int r = 0; r < spec.hidden_size; ++r) {
            for (int c = 0; c < cols; ++c) {
                w(r, c) = dist(rng);
            }
        }
        p.weights.push_back(std::move(w));
        Vector b(spec.hidden_size);
        for (int i = 0; i < spec.hidden_size; ++i) {
            b(i) = dist(rng);
        }
        p.biases.push_back(std::move(b));
    }
    p.readout = Vector(spec.hidden_size);
    for (int i = 0; i < spec.hidden_size; ++i) {
        p.readout(i) = dist(rng);
    }
    return p;
}

} // namespace

TEST_CASE("packing places the first gate block at the front") {
    RnnSpec spec{CellKind::Lstm, 1, 1};
    RnnParams p;
    p.weights = {Matrix{{1.0, 2.0}}, Matrix::Zero(1, 2), Matrix::Zero(1, 2), Matrix::Zero(1, 2)};
    p.biases = {Vector::Constant(1, 3.0), Vector::Zero(1), Vector::Zero(1), Vector::Zero(1)};
    p.readout = Vector::Zero(1);

    const Vector theta = pack_params(p, spec);
    REQUIRE(theta.size() == 13);
    CHECK(theta(0) == 1.0);
    CHECK(theta(1) == 2.0);
    CHECK(theta(2) == 3.0);
    for (int i = 3; i < 13; ++i) {
        CHECK(theta(i) == 0.0);
    }
}

TEST_CASE("pack and unpack invert each other on random parameter sets") {
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int trial = 0; trial < 1000; ++trial) {
        RnnSpec spec;
        spec.cell_kind = trial % 2 == 0 ? CellKind::Lstm : CellKind::Gru;
        spec.hidden_size = dim(rng);
        spec.input_size = dim(rng);

        const RnnParams p = random_params(spec, rng);
        const Vector theta = pack_params(p, spec);
        REQUIRE(theta.size() == spec.param_count());

        const RnnParams q = unpack_params(theta, spec);
        for (int g = 0; g < spec.gate_count(); ++g) {
            CHECK(q.weights[g] == p.weights[g]);
            CHECK(q.biases[g] == p.biases[g]);
        }
        CHECK(q.readout == p.readout);

        // second direction: repacking the unpacked set is the identity
        CHECK(pack_params(q, spec) == theta);
    }
}

TEST_CASE("packed view maps gate blocks without copying") {
    std::mt19937_64 rng(7);
    RnnSpec spec{CellKind::Gru, 3, 2};
    const RnnParams p = random_params(spec, rng);
    const Vector theta = pack_params(p, spec);

    PackedView view(theta.data(), spec);
    for (int g = 0; g < spec.gate_count(); ++g) {
        CHECK(view.weight(g) == p.weights[g]);
        CHECK(view.bias(g) == p.biases[g]);
    }
    CHECK(view.readout() == p.readout);
}

TEST_CASE("packing rejects mismatched shapes") {
    RnnSpec spec{CellKind::Lstm, 2, 2};
    std::mt19937_64 rng(1);
    RnnParams p = random_params(spec, rng);
    p.weights[1] = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(pack_params(p, spec), ConfigError);

    p = random_params(spec, rng);
    p.readout = Vector::Zero(3);
    CHECK_THROWS_AS(pack_params(p, spec), ConfigError);

    CHECK_THROWS_AS(unpack_params(Vector::Zero(5), spec), ConfigError);
}
