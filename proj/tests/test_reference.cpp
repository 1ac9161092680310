#include <cmath>
#include <random>

#include "doctest.h"
#include "tanhfx/reference.hpp"

using namespace tanhfx;

TEST_CASE("tanh_ref") {
    CHECK(tanh_ref(0.0) == 0.0);
    CHECK(std::fabs(tanh_ref(1.0) - 0.761594155955764888119458282605) <= 1e-15);
    CHECK(std::fabs(tanh_ref(0.5) - 0.462117157260009758502318483644) <= 1e-15);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 8.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        REQUIRE(tanh_ref(-x) == -tanh_ref(x));
    }
}

TEST_CASE("domain_bound is atanh(1 - 2^-b)") {
    // mpmath values of atanh(1 - 2^-b).
    CHECK(domain_bound(7) == doctest::Approx(2.77063177257921307).epsilon(1e-12));
    CHECK(domain_bound(11) == doctest::Approx(4.15876099814358490).epsilon(1e-12));
    CHECK(domain_bound(15) == doctest::Approx(5.54516981502682297).epsilon(1e-12));
    CHECK(domain_bound(6) == doctest::Approx(2.42209354322929564).epsilon(1e-12));
    CHECK(domain_bound(10) == doctest::Approx(3.81206529283064476).epsilon(1e-12));
    CHECK(domain_bound(14) == doctest::Approx(5.19858859517769194).epsilon(1e-12));

    // Fractional-only 8/12/16-bit words.
    CHECK(domain_bound_for_width(8) == domain_bound(7));
    CHECK(domain_bound_for_width(16) == domain_bound(15));
    CHECK(domain_bound_for_width(16, 1) == domain_bound(14));

    CHECK(domain_bound(7) == doctest::Approx(2.77).epsilon(0.01 / 2.77));
    CHECK(domain_bound(11) == doctest::Approx(4.16).epsilon(0.01 / 4.16));
    CHECK(domain_bound(15) == doctest::Approx(5.55).epsilon(0.01 / 5.55));
    CHECK(domain_bound(6) == doctest::Approx(2.42).epsilon(0.01 / 2.42));
    CHECK(domain_bound(10) == doctest::Approx(3.82).epsilon(0.01 / 3.82));
    CHECK(domain_bound(14) == doctest::Approx(5.20).epsilon(0.01 / 5.20));

    CHECK_THROWS_AS(domain_bound(0), ConfigError);
    CHECK_THROWS_AS(domain_bound(32), ConfigError);
}

TEST_CASE("ideal_output clamps beyond the limit") {
    const DomainSpec d15 = DomainSpec::for_output(6.0, QFormat(0, 15));
    CHECK(d15.clamp_magnitude == 1.0 - 0x1p-15);
    CHECK(ideal_output(6.5, d15) == 1.0 - 0x1p-15);
    CHECK(ideal_output(6.0, d15) == 1.0 - 0x1p-15);
    CHECK(ideal_output(0.0, d15) == 0.0);
    CHECK(ideal_output(1.0, d15) == tanh_ref(1.0));

    const DomainSpec d7 = DomainSpec::for_output(6.0, QFormat(0, 7));
    CHECK(ideal_output(-7.0, d7) == -(1.0 - 0x1p-7));
    CHECK(d7.clamp_code(QFormat(0, 7)) == 127);

    // The limit may exceed the point where tanh reaches the clamp value.
    CHECK(d15.saturation_point() == doctest::Approx(5.54516981502682297).epsilon(1e-12));
    CHECK(d15.limit > d15.saturation_point());
}
