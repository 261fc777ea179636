#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

#include "socfield/accumulator.hpp"

using namespace socfield;

namespace {

// naive reference loop, kept apart from one_step_sum on purpose
double naive_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

std::vector<double> random_stream(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

} // namespace

TEST_CASE("chunk_count: exact division, empty, and padding") {
    CHECK(chunk_count(48, 8) == 6); // 8 * fan-out 6 over K = 8
    CHECK(chunk_count(0, 4) == 0);
    CHECK(chunk_count(5, 4) == 2);
    CHECK(chunk_count(16, 16) == 1);
    CHECK_THROWS_AS(chunk_count(10, 3), ConfigError);
}

TEST_CASE("one_step_sum: empty, small, and oracle comparison") {
    CHECK(one_step_sum(std::span<const double>{}) == 0.0);
    const std::vector<double> v{1.0, 2.0, 3.0};
    CHECK(one_step_sum(std::span<const double>(v)) == 6.0);

    std::mt19937_64 rng(123);
    const auto stream = random_stream(rng, 48);
    CHECK(one_step_sum(std::span<const double>(stream)) == naive_sum(stream));
}

TEST_CASE("multi_step_sum: hand-checked examples") {
    SUBCASE("exact division") {
        const std::vector<double> v{1, 2, 3, 4, 5, 6};
        // strided partials with K=2: {1+3+5, 2+4+6} = {9, 12}
        CHECK(multi_step_sum(std::span<const double>(v), 2) == 21.0);
    }
    SUBCASE("zero padding") {
        const std::vector<double> v{1, 2, 3, 4, 5};
        // padded to 8 terms; partials {1+5, 2, 3, 4}
        CHECK(multi_step_sum(std::span<const double>(v), 4) == 15.0);
    }
    SUBCASE("invalid chunk width") {
        const std::vector<double> v{1, 2};
        CHECK_THROWS_AS(multi_step_sum(std::span<const double>(v), 3), ConfigError);
        CHECK_THROWS_AS(multi_step_sum(std::span<const double>(v), 0), ConfigError);
        CHECK_THROWS_AS(multi_step_sum(std::span<const double>(v), 32), ConfigError);
    }
}

TEST_CASE("multi_step_sum equals one_step_sum within tolerance") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len(0, 2000);
    for (int trial = 0; trial < 300; ++trial) {
        const auto stream = random_stream(rng, len(rng));
        const double one = one_step_sum(std::span<const double>(stream));
        double abs_sum = 0.0;
        for (double x : stream) abs_sum += std::abs(x);
        for (const int k : {2, 4, 8, 16}) {
            const double multi = multi_step_sum(std::span<const double>(stream), k);
            CHECK(std::abs(multi - one) <= 1e-6 * (1.0 + abs_sum));
        }
    }
}

TEST_CASE("multi_step_sum is exact on 24-bit integer streams") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int32_t> dist(-(1 << 24) + 1, (1 << 24) - 1);
    std::uniform_int_distribution<std::size_t> len(0, 1000);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> stream(len(rng));
        for (auto& x : stream) x = static_cast<double>(dist(rng));
        const double one = one_step_sum(std::span<const double>(stream));
        for (const int k : {2, 4, 8, 16}) {
            CHECK(multi_step_sum(std::span<const double>(stream), k) == one);
        }
    }
}

TEST_CASE("padding neutrality: appended zeros change nothing") {
    std::mt19937_64 rng(99);
    auto stream = random_stream(rng, 37);
    const double one = one_step_sum(std::span<const double>(stream));
    const double multi = multi_step_sum(std::span<const double>(stream), 8);
    stream.insert(stream.end(), 16, 0.0);
    CHECK(one_step_sum(std::span<const double>(stream)) == one);
    CHECK(multi_step_sum(std::span<const double>(stream), 8) == multi);
}

TEST_CASE("sums are deterministic: repeated evaluation is bit-identical") {
    std::mt19937_64 rng(5);
    const auto stream = random_stream(rng, 777);
    const double a1 = one_step_sum(std::span<const double>(stream));
    const double a2 = one_step_sum(std::span<const double>(stream));
    CHECK(std::memcmp(&a1, &a2, sizeof a1) == 0);
    const double b1 = multi_step_sum(std::span<const double>(stream), 16);
    const double b2 = multi_step_sum(std::span<const double>(stream), 16);
    CHECK(std::memcmp(&b1, &b2, sizeof b1) == 0);
}

TEST_CASE("StepCache: storage is K scalars, independent of stream length") {
    for (const int k : {2, 4, 8, 16}) {
        StepCache cache(k);
        CHECK(cache.partials().size() == static_cast<std::size_t>(k));
        CHECK(cache.chunk_width() == k);
    }
    CHECK_THROWS_AS(StepCache(5), ConfigError);
    // the cache itself never grows with n
    static_assert(sizeof(StepCache) <= 16 * sizeof(double) + alignof(double) * 2);
}

TEST_CASE("multi_step_sum: padding-region reads are exactly zero") {
    // terms past n must read as zero strength: a stream functor that poisons
    // out-of-range reads would fail loudly
    int calls_past_n = 0;
    const auto term = [&](std::size_t i) -> double {
        if (i >= 5) {
            ++calls_past_n;
            return 1e9; // would wreck the sum if ever consumed
        }
        return 1.0;
    };
    CHECK(multi_step_sum(term, 5, 8) == 5.0);
    CHECK(calls_past_n == 0);
}
