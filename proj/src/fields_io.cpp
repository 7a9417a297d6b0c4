#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nskr/fields_io.hpp"
#include "nskr/norms.hpp"

namespace nskr {

void write_field_csv(const SpectralField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    const GridSpec& g = f.grid();
    out << "# L=" << std::hexfloat << g.box_length << std::defaultfloat << " N=" << g.n
        << " rank=" << f.ncomp() << "\n";
    out << "k1,k2,k3,comp,re,im\n";
    out << std::hexfloat;
    for (int c = 0; c < f.ncomp(); ++c) {
        auto v = f.comp(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == cplx(0.0)) continue;
            auto k = g.wave_index(i);
            out << k[0] << "," << k[1] << "," << k[2] << "," << c << "," << v[i].real() << ","
                << v[i].imag() << "\n";
        }
    }
}

SpectralField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    std::getline(in, header);
    double L = 0;
    int N = 0, rank = 0;
    {
        std::istringstream hs(header);
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("L=", 0) == 0) L = std::strtod(tok.c_str() + 2, nullptr);
            if (tok.rfind("N=", 0) == 0) N = std::atoi(tok.c_str() + 2);
            if (tok.rfind("rank=", 0) == 0) rank = std::atoi(tok.c_str() + 5);
        }
    }
    if (N == 0 || L == 0 || (rank != 1 && rank != 3))
        throw std::runtime_error("malformed field CSV header in " + path);
    GridSpec g(N, L);
    SpectralField f(g, FieldRank(rank));
    std::string line;
    std::getline(in, line);  // column names
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        long k[3];
        int c;
        double re, im;
        for (int q = 0; q < 3; ++q) {
            std::getline(ls, cell, ',');
            k[q] = std::strtol(cell.c_str(), nullptr, 10);
        }
        std::getline(ls, cell, ',');
        c = std::atoi(cell.c_str());
        std::getline(ls, cell, ',');
        re = std::strtod(cell.c_str(), nullptr);
        std::getline(ls, cell, ',');
        im = std::strtod(cell.c_str(), nullptr);
        f.at(c, g.flat(g.unwrap(int(k[0])), g.unwrap(int(k[1])), g.unwrap(int(k[2])))) = cplx(re, im);
    }
    return f;
}

namespace {
constexpr char kMagic[8] = {'N', 'S', 'K', 'R', 'F', 'L', 'D', '1'};
}

// binary layout (little-endian): magic, int64 N, double L, int32 rank,
// then rank * N^3 complex doubles in flat index order.
void write_field_binary(const SpectralField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(kMagic, 8);
    std::int64_t n = f.grid().n;
    double L = f.grid().box_length;
    std::int32_t rank = f.ncomp();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&L), 8);
    out.write(reinterpret_cast<const char*>(&rank), 4);
    for (int c = 0; c < f.ncomp(); ++c) {
        auto v = f.comp(c);
        out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(cplx)));
    }
}

SpectralField read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("bad field snapshot magic in " + path);
    std::int64_t n;
    double L;
    std::int32_t rank;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&L), 8);
    in.read(reinterpret_cast<char*>(&rank), 4);
    GridSpec g(int(n), L);
    SpectralField f(g, FieldRank(rank));
    for (int c = 0; c < f.ncomp(); ++c) {
        auto v = f.comp(c);
        in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(cplx)));
    }
    if (!in) throw std::runtime_error("truncated field snapshot " + path);
    return f;
}

// --------------------------------------------------------- random data

namespace {

// impose f(-k) = conj(f(k)) by folding, zeroing the self-conjugate Nyquist planes
void hermitize(SpectralField& f) {
    const GridSpec& g = f.grid();
    for (int c = 0; c < f.ncomp(); ++c) {
        auto v = f.comp(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto k = g.wave_index(i);
            if (k[0] == -g.n / 2 || k[1] == -g.n / 2 || k[2] == -g.n / 2) {
                v[i] = 0.0;
                continue;
            }
            std::size_t ci = g.conj_index(i);
            if (ci < i) continue;
            if (ci == i) {
                v[i] = v[i].real();
                continue;
            }
            cplx half = 0.5 * (v[i] + std::conj(v[ci]));
            v[i] = half;
            v[ci] = std::conj(half);
        }
    }
}

}  // namespace

SpectralField random_band_field(const GridSpec& grid, const DyadicDecomposition& d,
                                const std::map<int, double>& block_amplitudes, double s, double p,
                                unsigned seed, FieldRank rank) {
    SpectralField f(grid, rank);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& [j, amp] : block_amplitudes) {
        d.check_block(j);
        SpectralField piece(grid, rank);
        // exclusive band of block j: neighbours vanish there
        const double lo = (4.0 / 3.0) * std::ldexp(1.0, j);
        const double hi = 2.0 * std::ldexp(1.0, j);
        bool any = false;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double r = d.radius(i);
            if (r < lo || r > hi) continue;
            for (int c = 0; c < piece.ncomp(); ++c)
                piece.at(c, i) = cplx(gauss(rng), gauss(rng));
            any = true;
        }
        if (!any)
            throw std::runtime_error("random_band_field: no lattice modes in exclusive band of block " +
                                     std::to_string(j));
        hermitize(piece);
        double cur = std::pow(2.0, j * s) *
                     fourier_lebesgue_norm(dyadic_project(piece, d, j), p);
        if (cur == 0.0)
            throw std::runtime_error("random_band_field: degenerate block sample");
        piece *= cplx(amp / cur, 0.0);
        f += piece;
    }
    return f;
}

SpectralField continuum_random_field(const GridSpec& grid, double inner_radius,
                                     double outer_radius, unsigned seed, FieldRank rank) {
    // fixed sum of smooth spectral bumps: refining the grid samples the same function
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n_bumps = 24;
    struct Bump {
        double c[3], width, phase, amp;
    };
    std::vector<Bump> bumps(n_bumps);
    for (Bump& b : bumps) {
        double r = inner_radius + (outer_radius - inner_radius) * unif(rng);
        double ct = 2.0 * unif(rng) - 1.0, ph = 2.0 * M_PI * unif(rng);
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        b.c[0] = r * st * std::cos(ph);
        b.c[1] = r * st * std::sin(ph);
        b.c[2] = r * ct;
        b.width = 0.15 * outer_radius * (0.5 + unif(rng));
        b.phase = 2.0 * M_PI * unif(rng);
        b.amp = 0.3 + unif(rng);
    }
    SpectralField f(grid, rank);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto xi = grid.xi(i);
        double r = grid.xi_norm(i);
        if (r < inner_radius * 0.5 || r > outer_radius * 1.5) continue;
        cplx val = 0.0;
        for (const Bump& b : bumps) {
            double d2 = 0.0;
            for (int c = 0; c < 3; ++c) d2 += (xi[c] - b.c[c]) * (xi[c] - b.c[c]);
            val += b.amp * std::exp(-d2 / (2.0 * b.width * b.width)) *
                   std::exp(cplx(0.0, b.phase + 0.7 * xi[0] / b.width));
        }
        for (int c = 0; c < f.ncomp(); ++c) f.at(c, i) = val * (c == 0 ? 1.0 : 0.5 + 0.1 * c);
    }
    hermitize(f);
    return f;
}

FlowState random_flow_state(const GridSpec& grid, const DyadicDecomposition& d,
                            const std::map<int, double>& block_amplitudes, double s, double p,
                            unsigned seed) {
    FlowState st(grid);
    st.a = random_band_field(grid, d, block_amplitudes, s, p, seed, FieldRank::scalar);
    st.m = random_band_field(grid, d, block_amplitudes, s, p, seed + 1, FieldRank::vector3);
    return st;
}

}  // namespace nskr
