#include <doctest.h>

#include <cmath>

#include "nskr/fields_io.hpp"
#include "nskr/norms.hpp"
#include "test_support.hpp"

using namespace nskr;

TEST_SUITE_BEGIN("norms");

TEST_CASE("fourier-lebesgue norm") {
    GridSpec g = GridSpec::cube(16, 2.0);
    const double w = g.freq_cell_volume();

    SUBCASE("single mode, p = 2") {
        SpectralField f = test::single_mode(g, {2, 1, 0}, cplx(3.0, 0.0));
        // Hermitian pair: two modes of amplitude 3
        CHECK(fourier_lebesgue_norm(f, 2.0) ==
              doctest::Approx(3.0 * std::sqrt(2.0 * w)).epsilon(1e-13));
    }
    SUBCASE("p = inf is the weighted coefficient sum") {
        SpectralField f(g, FieldRank::scalar);
        f.at(0, g.flat(1, 0, 0)) = 2.0;
        f.at(0, g.flat(0, 2, 0)) = 5.0;
        CHECK(fourier_lebesgue_norm(f, p_inf) == doctest::Approx(7.0 * w).epsilon(1e-13));
    }
    SUBCASE("homogeneity") {
        TransformEngine engine(g);
        SpectralField f = test::random_hermitian_field(engine, 3);
        for (double p : {1.0, 2.0, 3.0, p_inf}) {
            double n1 = fourier_lebesgue_norm(f, p);
            SpectralField cf = f;
            cf *= cplx(-2.5, 0.0);
            CHECK(fourier_lebesgue_norm(cf, p) == doctest::Approx(2.5 * n1).epsilon(1e-12));
        }
    }
    SUBCASE("zero mode is ignored") {
        SpectralField f(g, FieldRank::scalar);
        f.at(0, 0) = 77.0;
        CHECK(fourier_lebesgue_norm(f, 2.0) == 0.0);
    }
}

TEST_CASE("besov and fourier-besov block norms") {
    GridSpec g = GridSpec::cube(32, 2.0);
    TransformEngine engine(g);
    DyadicDecomposition d = DyadicDecomposition::standard(g);

    SUBCASE("single mode in an exclusive band hits one block") {
        // (2,2,0): |xi| = sqrt(2) in the j=0 exclusive band
        SpectralField f = test::single_mode(g, {2, 2, 0}, cplx(2.0, 1.0));
        double amp = std::abs(cplx(2.0, 1.0));
        double s = 0.7;
        double expect = std::pow(2.0, 0.0 * s) * amp * std::sqrt(2.0 * g.freq_cell_volume());
        CHECK(fourier_besov_norm(f, d, s, 2.0, 1.0) == doctest::Approx(expect).epsilon(1e-12));
        // only one block contributes: sigma = inf gives the same value
        CHECK(fourier_besov_norm(f, d, s, 2.0, p_inf) == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("p = 2 flavors agree up to the Plancherel constant (2 pi)^{3/2}") {
        SpectralField f = test::random_hermitian_field(engine, 21);
        double fb = besov_norm(f, d, NormSpec{0.4, 2.0, 1.0, NormFlavor::fourier_besov});
        double bs = besov_norm(f, d, NormSpec{0.4, 2.0, 1.0, NormFlavor::besov}, &engine);
        CHECK(fb / bs == doctest::Approx(std::pow(2.0 * M_PI, 1.5)).epsilon(1e-10));
    }
    SUBCASE("derivative equivalence per block") {
        SpectralField f = test::random_hermitian_field(engine, 22);
        SpectralField df(g, FieldRank::scalar);
        // |xi| multiplier: block ratio must sit inside the support radii [1, 8/3]
        for (std::size_t i = 0; i < g.size(); ++i) df.at(0, i) = g.xi_norm(i) * f.at(0, i);
        auto bf = block_norms(f, d, 2.0, NormFlavor::fourier_besov);
        auto bdf = block_norms(df, d, 2.0, NormFlavor::fourier_besov);
        for (int b = 0; b < d.blocks(); ++b) {
            if (bf[b] < 1e-12) continue;
            double ratio = bdf[b] / (bf[b] * std::ldexp(1.0, d.j_min() + b));
            CHECK(ratio >= 3.0 / 4.0 - 1e-9);
            CHECK(ratio <= 8.0 / 3.0 + 1e-9);
        }
    }
    SUBCASE("absolute homogeneity") {
        SpectralField f = test::random_hermitian_field(engine, 23);
        double n = fourier_besov_norm(f, d, -0.5, 3.0, 1.0);
        SpectralField cf = f;
        cf *= cplx(0.0, 4.0);  // modulus 4
        CHECK(fourier_besov_norm(cf, d, -0.5, 3.0, 1.0) == doctest::Approx(4.0 * n).epsilon(1e-12));
    }
    SUBCASE("interpolation inequality is Holder-sharp") {
        SpectralField f = test::random_hermitian_field(engine, 24);
        double s1 = -1.0, s2 = 2.0, th = 0.35;
        double lhs = fourier_besov_norm(f, d, th * s1 + (1 - th) * s2, 2.0, 1.0);
        double rhs = std::pow(fourier_besov_norm(f, d, s1, 2.0, 1.0), th) *
                     std::pow(fourier_besov_norm(f, d, s2, 2.0, 1.0), 1 - th);
        CHECK(lhs <= rhs * (1 + 1e-10));
    }
    SUBCASE("embedding inequality, p1 <= p2") {
        SpectralField f = test::random_hermitian_field(engine, 25);
        double p1 = 2.0, p2 = 4.0, s = 0.8;
        double lhs = fourier_besov_norm(f, d, s - 3.0 * (1 / p1 - 1 / p2), p2, 1.0);
        double rhs = fourier_besov_norm(f, d, s, p1, 1.0);
        // measured constant stays modest (annulus volume factor)
        CHECK(lhs <= 5.0 * rhs);
    }
}

TEST_CASE("truncated norms") {
    GridSpec g = GridSpec::cube(32, 2.0);
    TransformEngine engine(g);
    DyadicDecomposition d = DyadicDecomposition::standard(g);
    SpectralField f = test::random_hermitian_field(engine, 31);
    NormSpec spec{0.3, 2.0, 1.0, NormFlavor::fourier_besov};

    SUBCASE("low + middle + high = full for sigma = 1") {
        double alpha = 0.25, beta = 1.0;
        double lo = truncated_norm(f, d, spec, TruncationBand::low(alpha));
        double mid = truncated_norm(f, d, spec, TruncationBand::middle(alpha, beta));
        double hi = truncated_norm(f, d, spec, TruncationBand::high(beta));
        double full = besov_norm(f, d, spec);
        CHECK(lo + mid + hi == doctest::Approx(full).epsilon(1e-12));
    }
    SUBCASE("field above beta has no low/middle part") {
        SpectralField s = test::single_mode(g, {4, 4, 0}, cplx(1.0, 0.0));  // j = 1 band
        CHECK(truncated_norm(s, d, spec, TruncationBand::low(0.5)) == 0.0);
        CHECK(truncated_norm(s, d, spec, TruncationBand::middle(0.5, 1.0)) == 0.0);
        CHECK(truncated_norm(s, d, spec, TruncationBand::high(1.0)) > 0.0);
    }
    SUBCASE("threshold filter matches a brute-force block filter") {
        double alpha = 0.5;
        auto blocks = block_norms(f, d, 2.0, NormFlavor::fourier_besov);
        double brute = 0.0;
        for (int b = 0; b < d.blocks(); ++b) {
            int j = d.j_min() + b;
            if (std::ldexp(1.0, j) <= alpha) brute += std::pow(2.0, j * spec.s) * blocks[b];
        }
        CHECK(truncated_norm(f, d, spec, TruncationBand::low(alpha)) ==
              doctest::Approx(brute).epsilon(1e-13));
    }
}

TEST_CASE("time traces and Chemin-Lerner norms") {
    GridSpec g = GridSpec::cube(16, 2.0);
    TransformEngine engine(g);
    DyadicDecomposition d = DyadicDecomposition::standard(g);
    SpectralField f = test::random_hermitian_field(engine, 41);
    auto row = block_norms(f, d, 2.0, NormFlavor::fourier_besov);

    SUBCASE("constant in time") {
        TimeTrace tr(d.j_min(), d.j_max());
        for (int k = 0; k <= 10; ++k) tr.append(0.2 * k, row);
        double stat = aggregate_blocks(row, d.j_min(), 0.6, 1.0);
        CHECK(chemin_lerner_norm(tr, 0.6, 1.0, p_inf) == doctest::Approx(stat).epsilon(1e-13));
        CHECK(chemin_lerner_norm(tr, 0.6, 1.0, 1.0) == doctest::Approx(2.0 * stat).epsilon(1e-13));
    }
    SUBCASE("Minkowski ordering") {
        // plain time-norm <= tilde norm when r >= sigma (triangle inequality in L^r_t),
        // and the order reverses for r <= sigma
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> unif(0.1, 2.0);
        TimeTrace tr(d.j_min(), d.j_max());
        std::vector<std::vector<double>> rows;
        for (int k = 0; k <= 20; ++k) {
            std::vector<double> rr(row.size());
            for (auto& v : rr) v = unif(rng);
            tr.append(0.1 * k, rr);
            rows.push_back(rr);
        }
        auto plain_norm = [&](double r, double s) {
            double acc = 0.0;
            auto w = tr.quadrature_weights();
            for (std::size_t k = 0; k < rows.size(); ++k)
                acc += w[k] * std::pow(aggregate_blocks(rows[k], d.j_min(), s, 1.0), r);
            return std::pow(acc, 1.0 / r);
        };
        double r = 3.0, s = 0.4;  // r >= sigma = 1
        CHECK(plain_norm(r, s) <= chemin_lerner_norm(tr, s, 1.0, r) * (1 + 1e-12));
        // r = 1 <= sigma = 2: tilde <= plain
        double acc = 0.0;
        auto w = tr.quadrature_weights();
        for (std::size_t k = 0; k < rows.size(); ++k)
            acc += w[k] * aggregate_blocks(rows[k], d.j_min(), s, 2.0);
        CHECK(chemin_lerner_norm(tr, s, 2.0, 1.0) <= acc * (1 + 1e-12));
    }
    SUBCASE("contract checks") {
        TimeTrace tr(d.j_min(), d.j_max());
        CHECK_THROWS_AS(tr.block_time_lr(2.0), std::invalid_argument);
        tr.append(0.0, row);
        CHECK_THROWS_AS(tr.append(0.0, row), std::invalid_argument);
        std::vector<double> bad(row.size() + 1);
        CHECK_THROWS_AS(tr.append(1.0, bad), std::invalid_argument);
    }
}

TEST_CASE("norm report rows") {
    GridSpec g = GridSpec::cube(16, 2.0);
    DyadicDecomposition d = DyadicDecomposition::standard(g);
    SpectralField f = test::single_mode(g, {2, 2, 0}, cplx(1.0, 0.0));
    NormSpec spec{0.5, 2.0, 1.0, NormFlavor::fourier_besov};
    std::string row = norm_report_row(f, d, spec, TruncationBand::all(), p_inf);
    CHECK(row.rfind("fourier_besov,0.5,2,1,inf,all,", 0) == 0);
    CHECK(norm_report_header() == "norm_kind,s,p,sigma,r,band,value,tail_mass");
}

TEST_CASE("partition tail mass reporting") {
    GridSpec g = GridSpec::cube(32, 2.0);
    DyadicDecomposition d = DyadicDecomposition::standard(g);
    SpectralField inside = test::single_mode(g, {2, 2, 0}, cplx(1.0, 0.0));
    CHECK(partition_tail_mass(inside, d) < 1e-14);
    // at the nyquist corner the partition has no coverage
    SpectralField outside = test::single_mode(g, {15, 15, 15}, cplx(1.0, 0.0));
    CHECK(partition_tail_mass(outside, d) == doctest::Approx(1.0));
}

TEST_SUITE_END();
