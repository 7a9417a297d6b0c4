#include <doctest.h>

#include <cmath>

#include "conv_oracle.hpp"
#include "nskr/pressure.hpp"
#include "test_support.hpp"

using namespace nskr;

TEST_SUITE_BEGIN("nonlinearity");

TEST_CASE("pressure helpers") {
    PressureLaw gamma2(2.0);
    SUBCASE("b = 0 annihilates everything") {
        auto h = eval_pressure_helpers(0.0, gamma2);
        CHECK(h.i == 0.0);
        CHECK(h.j == 0.0);
        CHECK(h.g == 0.0);
        CHECK(h.h == 0.0);
    }
    SUBCASE("gamma = 2 closed forms") {
        for (double b : {-0.4, -1e-6, 0.3, 1.0}) {
            CHECK(helper_j(b, gamma2) == doctest::Approx(b).epsilon(1e-12));
            CHECK(helper_g(b, gamma2) == doctest::Approx(b * b / 2).epsilon(1e-10));
            CHECK(std::abs(helper_h(b, gamma2)) < 1e-12);
        }
        CHECK(helper_i(1.0) == doctest::Approx(0.5));
    }
    SUBCASE("series and direct branches of H agree") {
        PressureLaw g53(5.0 / 3.0);
        // straddle the 1e-4 switch
        double left = helper_h(0.99e-4, g53);
        double right = helper_h(1.01e-4, g53);
        CHECK(left == doctest::Approx(right).epsilon(1e-6));
        // generic consistency: G(b) = (gamma-1)/2 b^2 + H(b) b^2
        for (double b : {-0.3, 0.2, 0.8}) {
            double lhs = helper_g(b, g53);
            double rhs = ((g53.gamma - 1.0) / 2.0 + helper_h(b, g53)) * b * b;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
    SUBCASE("density floor") {
        CHECK_THROWS_AS(helper_i(-1.0), std::domain_error);
        CHECK_THROWS_AS(helper_j(-1.5, gamma2), std::domain_error);
    }
    SUBCASE("gamma must exceed one") {
        CHECK_THROWS_AS(PressureLaw(1.0), std::invalid_argument);
    }
}

namespace {

FlowState sparse_state(const GridSpec& g, unsigned seed, double amp_a, double amp_m,
                       int kmax = 2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    FlowState s(g);
    for (int k0 = -kmax; k0 <= kmax; ++k0)
        for (int k1 = -kmax; k1 <= kmax; ++k1)
            for (int k2 = 0; k2 <= kmax; ++k2) {
                if (k0 == 0 && k1 == 0 && k2 == 0) continue;
                std::size_t i = g.flat(g.unwrap(k0), g.unwrap(k1), g.unwrap(k2));
                std::size_t ci = g.conj_index(i);
                cplx va(amp_a * gauss(rng), amp_a * gauss(rng));
                s.a.at(0, i) = va;
                s.a.at(0, ci) = std::conj(va);
                for (int c = 0; c < 3; ++c) {
                    cplx vm(amp_m * gauss(rng), amp_m * gauss(rng));
                    s.m.at(c, i) = vm;
                    s.m.at(c, ci) = std::conj(vm);
                }
            }
    return s;
}

double term_rel_diff(const NonlinearityTerms& x, const NonlinearityTerms& y, int k) {
    return nskr::test::rel_diff(x.term(k), y.term(k));
}

}  // namespace

TEST_CASE("nonlinearity against the convolution oracle") {
    GridSpec g = GridSpec::cube(16, 2.0);
    TransformEngine engine(g);
    PhysParams p(1.0, 0.5, 1.25, 0.5, 2.0, PressureLaw(2.0));
    FlowState s = sparse_state(g, 77, 0.1, 0.08);

    NonlinearityTerms impl =
        eval_nonlinearity_terms(s, p, engine, NonlinearityVariant::quadratic_freeze);
    NonlinearityTerms oracle = test::oracle_terms(s, p);
    for (int k = 0; k < NonlinearityTerms::count; ++k) {
        CAPTURE(NonlinearityTerms::term_name(k));
        CHECK(term_rel_diff(impl, oracle, k) < 1e-12);
    }
    // lean path agrees with the per-term sum
    SpectralField lean = eval_nonlinearity(s, p, engine, NonlinearityVariant::quadratic_freeze);
    CHECK(test::rel_diff(lean, impl.total()) < 1e-12);
}

TEST_CASE("nonlinearity structure") {
    GridSpec g = GridSpec::cube(16, 2.0);
    TransformEngine engine(g);
    PhysParams p(1.0, 1.0, 1.0, 0.5, 1.0, PressureLaw(2.0));

    SUBCASE("a = 0: only the quadratic momentum flux survives") {
        FlowState s = sparse_state(g, 5, 0.0, 0.1);
        NonlinearityTerms t = eval_nonlinearity_terms(s, p, engine);
        CHECK(test::max_abs(t.visc_laplace) < 1e-16);
        CHECK(test::max_abs(t.visc_graddiv) < 1e-16);
        CHECK(test::max_abs(t.pressure) < 1e-14);
        CHECK(test::max_abs(t.cap_a_lap) < 1e-16);
        CHECK(test::max_abs(t.cap_grad_sq) < 1e-16);
        CHECK(test::max_abs(t.cap_tensor) < 1e-16);
        CHECK(test::max_abs(t.convection) > 0.0);
        // equals -div(m (x) m): oracle with eps*a = 0 reproduces it
        NonlinearityTerms oracle = test::oracle_terms(s, p);
        CHECK(term_rel_diff(t, oracle, 0) < 1e-12);
    }
    SUBCASE("m = 0: only pressure and capillary terms survive") {
        FlowState s = sparse_state(g, 6, 0.1, 0.0);
        NonlinearityTerms t = eval_nonlinearity_terms(s, p, engine,
                                                      NonlinearityVariant::quadratic_freeze);
        CHECK(test::max_abs(t.convection) < 1e-16);
        CHECK(test::max_abs(t.visc_laplace) < 1e-16);
        CHECK(test::max_abs(t.visc_graddiv) < 1e-16);
        CHECK(test::max_abs(t.pressure) > 0.0);
        CHECK(test::max_abs(t.cap_a_lap) > 0.0);
        NonlinearityTerms oracle = test::oracle_terms(s, p);
        for (int k = 3; k < 7; ++k) CHECK(term_rel_diff(t, oracle, k) < 1e-12);
    }
    SUBCASE("every term has zero spatial mean") {
        FlowState s = sparse_state(g, 7, 0.12, 0.1);
        for (auto variant : {NonlinearityVariant::full, NonlinearityVariant::quadratic_freeze}) {
            NonlinearityTerms t = eval_nonlinearity_terms(s, p, engine, variant);
            double scale = 0.0;
            for (int k = 0; k < NonlinearityTerms::count; ++k)
                scale = std::max(scale, test::max_abs(t.term(k)));
            for (int k = 0; k < NonlinearityTerms::count; ++k)
                for (int c = 0; c < 3; ++c)
                    CHECK(std::abs(t.term(k).at(c, 0)) <= 1e-12 * scale);
        }
    }
    SUBCASE("hermitian symmetry preserved") {
        FlowState s = sparse_state(g, 8, 0.1, 0.1);
        SpectralField n = eval_nonlinearity(s, p, engine);
        CHECK(n.hermitian_defect() < 1e-11);
    }
    SUBCASE("density floor violation throws") {
        FlowState s(g);
        // large constant-ish density dip: a = -2.2/eps at the zero mode
        s.a.at(0, 0) = -2.2 / p.eps * std::pow(g.box_length, 3);
        CHECK_THROWS_AS(eval_nonlinearity(s, p, engine), DensityFloorViolation);
    }
}

TEST_SUITE_END();
