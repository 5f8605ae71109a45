// Bloch integrator against exact maps and an independent reference
// implementation.
//
// Oracles (test_util.hpp): cross-product-form RK4 and the Rodrigues
// rotation, both written without looking at the library integrator. The
// free-precession map has a closed form (damped rotation about z plus T1
// recovery), so it is checked exactly.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "aeris/bloch.hpp"
#include "test_util.hpp"

using namespace aeris;
using testutil::Vec3;

namespace {

double max_diff(const Magnetization& m, const Vec3& v) {
    return std::max({std::abs(m.x - v[0]), std::abs(m.y - v[1]),
                     std::abs(m.z - v[2])});
}

} // namespace

TEST_CASE("free precession closed form") {
    const Magnetization m0{1.0, 0.0, 0.0};

    SUBCASE("quarter turn, no relaxation") {
        // +100 Hz for 2.5 ms = +quarter turn: x -> y.
        const double inf = std::numeric_limits<double>::infinity();
        const auto m = free_precess(m0, 100.0, 2.5e-3, inf, inf);
        CHECK(std::abs(m.x) < 1e-12);
        CHECK(m.y == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(m.z) < 1e-15);
    }

    SUBCASE("transverse decay and longitudinal recovery") {
        const Magnetization tilted{0.6, 0.0, -0.2};
        const auto m = free_precess(tilted, 0.0, 0.05, 0.2, 0.1);
        CHECK(m.x == doctest::Approx(0.6 * std::exp(-0.5)).epsilon(1e-12));
        CHECK(m.y == doctest::Approx(0.0));
        CHECK(m.z ==
              doctest::Approx(1.0 - 1.2 * std::exp(-0.25)).epsilon(1e-12));
    }

    SUBCASE("matches the independent integrator with relaxation") {
        const auto rhs = testutil::bloch_rhs(0.0, 0.0, 320.0, 0.3, 0.1);
        const Vec3 ref =
            testutil::integrate(rhs, {0.3, -0.4, 0.8}, 0.01, 20000);
        const auto m =
            free_precess({0.3, -0.4, 0.8}, 320.0, 0.01, 0.3, 0.1);
        CHECK(max_diff(m, ref) < 1e-9);
    }

    SUBCASE("infinite relaxation times are exact identities") {
        const double inf = std::numeric_limits<double>::infinity();
        const auto m = free_precess({0.0, 0.0, 0.37}, 0.0, 1.0, inf, inf);
        CHECK(m.z == doctest::Approx(0.37).epsilon(1e-15));
    }
}

TEST_CASE("resonant drive against the rotation closed form") {
    const double inf = std::numeric_limits<double>::infinity();
    const Pulse quarter{50e3, 0.0, 0.25 / 50e3};

    SUBCASE("quarter Rabi period tips z onto -y") {
        // default step: 50 RK4 steps, phase lag ~ theta^5/120 per step
        const auto m = drive({0, 0, 1}, quarter, 0.0, inf, inf).states.back();
        CHECK(std::abs(m.x) < 1e-7);
        CHECK(m.y == doctest::Approx(-1.0).epsilon(1e-7));
        CHECK(std::abs(m.z) < 1e-7);
    }

    SUBCASE("full period is the identity") {
        const Pulse full{50e3, 0.0, 1.0 / 50e3};
        const auto m = drive({0, 0, 1}, full, 0.0, inf, inf).states.back();
        CHECK(max_diff(m, {0, 0, 1}) < 2e-7);
    }

    SUBCASE("randomized initial states, fine step, tolerance 1e-8") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            Magnetization m0{u(rng), u(rng), u(rng)};
            const Pulse p{50e3, 0.0, 0.6e-5 * (1 + trial % 5)};
            const auto got =
                drive(m0, p, 0.0, inf, inf, {}, 2e-8).states.back();
            const auto want = rotation_closed_form(m0, p.rabi_hz, p.duration_s);
            CHECK(max_diff(got, {want.x, want.y, want.z}) < 1e-8);
        }
    }
}

TEST_CASE("detuned drive against the Rodrigues rotation") {
    const double inf = std::numeric_limits<double>::infinity();
    const double rabi = 50e3, delta = 7e3;
    const Pulse p{rabi, 0.0, 40e-6};

    // no relaxation: dM/dt = w x M with w = 2 pi (rabi, 0, delta)
    const Vec3 w = {2 * std::numbers::pi * rabi, 0.0,
                    2 * std::numbers::pi * delta};
    const Vec3 ref = testutil::rotate_about(w, {0, 0, 1}, p.duration_s);
    const auto got =
        drive({0, 0, 1}, p, delta, inf, inf, {}, 2e-8).states.back();
    CHECK(max_diff(got, ref) < 1e-8);

    SUBCASE("nonzero RF phase") {
        const double phi = 1.1;
        const Pulse pp{rabi, phi, 40e-6};
        const Vec3 wp = {2 * std::numbers::pi * rabi * std::cos(phi),
                         -2 * std::numbers::pi * rabi * std::sin(phi),
                         2 * std::numbers::pi * delta};
        const Vec3 refp =
            testutil::rotate_about(wp, {0.2, -0.5, 0.8}, pp.duration_s);
        const auto gotp =
            drive({0.2, -0.5, 0.8}, pp, delta, inf, inf, {}, 2e-8)
                .states.back();
        CHECK(max_diff(gotp, refp) < 1e-8);
    }
}

TEST_CASE("integrator details") {
    const double inf = std::numeric_limits<double>::infinity();

    SUBCASE("fourth-order convergence") {
        // Richardson order estimate on a detuned, relaxing drive.
        const Pulse p{50e3, 0.3, 40e-6};
        auto run = [&](double step) {
            return drive({0, 0, 1}, p, 7e3, 0.05, 0.02, {}, step)
                .states.back();
        };
        const double T = 1.0 / 50e3;
        const auto a = run(T / 100), b = run(T / 200), c = run(T / 400);
        const double e1 = max_diff(a, {b.x, b.y, b.z});
        const double e2 = max_diff(b, {c.x, c.y, c.z});
        const double order = std::log2(e1 / e2);
        CHECK(order > 3.9);
        CHECK(order < 4.5);
    }

    SUBCASE("agrees with the independent RK4 at matched steps") {
        const Pulse p{50e3, 2.0, 40e-6};
        auto pert = [](double t) { return 0.01 * std::sin(2e5 * t); };
        const auto rhs = testutil::bloch_rhs(
            [&](double t) { return 50e3 * (1.0 + pert(t)); }, 2.0, 7e3, 0.05,
            0.02);
        const Vec3 ref = testutil::integrate(rhs, {0, 0, 1}, 40e-6, 400);
        const auto got =
            drive({0, 0, 1}, p, 7e3, 0.05, 0.02, pert, 1e-7).states.back();
        // same scheme, same grid -- differences are pure roundoff
        CHECK(max_diff(got, ref) < 1e-13);
    }

    SUBCASE("semigroup property on the uniform grid") {
        const Pulse whole{50e3, 0.8, 40e-6};
        const Pulse half{50e3, 0.8, 20e-6};
        const auto full = drive({0, 0, 1}, whole, 7e3, inf, inf).states.back();
        const auto first = drive({0, 0, 1}, half, 7e3, inf, inf).states.back();
        const auto second =
            drive(first, half, 7e3, inf, inf).states.back();
        // autonomous RHS + identical step: identical arithmetic, bitwise
        CHECK(full.x == second.x);
        CHECK(full.y == second.y);
        CHECK(full.z == second.z);
    }

    SUBCASE("norm stays on the unit sphere without relaxation") {
        // RK4 shrinks |M| by ~theta^6/144 per step; 10^4 default steps
        // stay within ~1e-7 of the sphere.
        Magnetization m{0.36, -0.48, 0.8};
        const Pulse p{50e3, 0.0, 1e-3};
        const auto end = drive(m, p, 320.0, inf, inf).states.back();
        CHECK(std::abs(end.norm() - 1.0) < 1e-6);
    }

    SUBCASE("trajectory grid is uniform and complete") {
        const Pulse p{50e3, 0.0, 4e-5};
        const auto traj = drive({0, 0, 1}, p, 0.0, inf, inf);
        REQUIRE(traj.times_s.size() == 401); // 200 steps per period * 2
        CHECK(traj.states.size() == traj.times_s.size());
        CHECK(traj.times_s.front() == 0.0);
        CHECK(traj.times_s.back() == doctest::Approx(4e-5).epsilon(1e-12));
        CHECK(traj.times_s[1] == doctest::Approx(1e-7).epsilon(1e-12));
    }

    SUBCASE("coarse or non-dividing steps are rejected") {
        const Pulse p{50e3, 0.0, 40e-6};
        // coarser than Rabi period / 100
        CHECK_THROWS_AS(
            drive({0, 0, 1}, p, 0.0, inf, inf, {}, 2.1e-7 * 2), PhysicsError);
        // does not divide the duration
        CHECK_THROWS_AS(
            drive({0, 0, 1}, p, 0.0, inf, inf, {}, 1.7e-7), PhysicsError);
    }
}

TEST_CASE("rotation speed error magnitude") {
    // (delta/Omega)^2/2 at 320 Hz detuning under a 50 kHz drive
    CHECK(rotation_speed_error(320.0, 50e3) ==
          doctest::Approx(2.048e-5).epsilon(1e-9));
    CHECK(rotation_speed_error(0.0, 50e3) == 0.0);
}
