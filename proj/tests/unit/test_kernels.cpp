#include "proxima/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace proxima;
using kernels::Exec;

TEST_CASE("serial and parallel kernels agree bit for bit")
{
    for (unsigned k = 1; k <= 3; ++k) {
        const auto s = kernels::distance_moments(k, 3000, 42, Exec::Serial);
        const auto p = kernels::distance_moments(k, 3000, 42, Exec::Parallel);
        CHECK(s.mean_distance == p.mean_distance);
        CHECK(s.mean_sq_distance == p.mean_sq_distance);
        CHECK(s.trials == 3000);
    }
    const auto ss = kernels::swap_moments(3000, 1, Exec::Serial);
    const auto sp = kernels::swap_moments(3000, 1, Exec::Parallel);
    CHECK(ss.mean_distance == sp.mean_distance);

    CalibrationParams cp;
    cp.samples = 700;
    CHECK(kernels::calibration_distances(cp, Exec::Serial) == kernels::calibration_distances(cp, Exec::Parallel));

    const auto fs = kernels::fabricated_inside_rate(4.9, 14, 20, 5000, 3, Exec::Serial);
    const auto fp = kernels::fabricated_inside_rate(4.9, 14, 20, 5000, 3, Exec::Parallel);
    CHECK(fs.hits == fp.hits);

    CHECK(kernels::bloom_fp_rate(20, 0.01, 100, 100, 4, Exec::Serial).hits ==
          kernels::bloom_fp_rate(20, 0.01, 100, 100, 4, Exec::Parallel).hits);
    CHECK(kernels::per_validator_miss_rate(2, 20, 0.01, 2000, 5, Exec::Serial).hits ==
          kernels::per_validator_miss_rate(2, 20, 0.01, 2000, 5, Exec::Parallel).hits);
    CHECK(kernels::random_set_inside_rate(4.9, 20, 1000, 6, Exec::Serial).hits ==
          kernels::random_set_inside_rate(4.9, 20, 1000, 6, Exec::Parallel).hits);
}

TEST_CASE("missing-tx distance moments track the analytical values")
{
    for (unsigned k = 1; k <= 3; ++k) {
        const auto m = kernels::distance_moments(k, 20000, 7);
        // E||S||^2 is exact; the mean distance sits just under its square root.
        CHECK(m.mean_sq_distance == doctest::Approx(expected_sq_distance(k)).epsilon(0.03));
        CHECK(m.mean_distance < distance_upper_bound(k));
        CHECK(m.mean_distance > 0.95 * distance_upper_bound(k));
    }
}

TEST_CASE("one-transaction swap")
{
    // Difference of two independent uniform vectors: E = 8 * (1/6) = 4/3.
    const auto m = kernels::swap_moments(50000, 11);
    CHECK(m.mean_sq_distance == doctest::Approx(4.0 / 3.0).epsilon(0.02));
    CHECK(m.mean_distance < std::sqrt(4.0 / 3.0));
}

TEST_CASE("per-validator miss rate stays under k times the target")
{
    for (unsigned k = 1; k <= 5; ++k) {
        const auto r = kernels::per_validator_miss_rate(k, 20, 0.01, 20000, 100 + k);
        const double sigma = std::sqrt(k * 0.01 / 20000.0);
        CHECK(r.rate() <= k * 0.01 + 3 * sigma);
    }
}

TEST_CASE("zero trials give zero estimates")
{
    CHECK(kernels::fabricated_inside_rate(4.9, 14, 20, 0, 1).rate() == 0.0);
    CHECK(kernels::distance_moments(1, 0, 1).trials == 0);
}
