#include <cmath>
#include <stdexcept>

#include "nskr/dyadic.hpp"
#include "nskr/nonlinearity.hpp"
#include "nskr/pressure.hpp"

namespace nskr {

SpectralField NonlinearityTerms::total() const {
    SpectralField out = convection;
    out += visc_laplace;
    out += visc_graddiv;
    out += pressure;
    out += cap_a_lap;
    out += cap_grad_sq;
    out += cap_tensor;
    return out;
}

const SpectralField& NonlinearityTerms::term(int k) const {
    switch (k) {
        case 0: return convection;
        case 1: return visc_laplace;
        case 2: return visc_graddiv;
        case 3: return pressure;
        case 4: return cap_a_lap;
        case 5: return cap_grad_sq;
        case 6: return cap_tensor;
    }
    throw std::out_of_range("NonlinearityTerms::term");
}

const char* NonlinearityTerms::term_name(int k) {
    static const char* names[] = {"convection",  "visc_laplace", "visc_graddiv", "pressure",
                                  "cap_a_lap",   "cap_grad_sq",  "cap_tensor"};
    return names[k];
}

namespace {

struct PhysicalStage {
    std::vector<double> a, lap_a;
    std::array<std::vector<double>, 3> m, grad_a;
    double min_density = 0.0, max_eps_a = 0.0;
};

PhysicalStage to_physical(const FlowState& s, const PhysParams& params,
                          const TransformEngine& engine, double density_floor) {
    const GridSpec& g = s.grid();
    PhysicalStage st;
    st.a.resize(g.size());
    st.lap_a.resize(g.size());
    engine.inverse(s.a.comp(0), st.a);
    for (int c = 0; c < 3; ++c) {
        st.m[c].resize(g.size());
        st.grad_a[c].resize(g.size());
        engine.inverse(s.m.comp(c), st.m[c]);
    }
    SpectralField ga = gradient(s.a);
    for (int c = 0; c < 3; ++c) engine.inverse(ga.comp(c), st.grad_a[c]);
    engine.inverse(laplacian(s.a).comp(0), st.lap_a);

    st.min_density = 1.0 + params.eps * st.a[0];
    for (double v : st.a) {
        st.min_density = std::min(st.min_density, 1.0 + params.eps * v);
        st.max_eps_a = std::max(st.max_eps_a, std::abs(params.eps * v));
    }
    if (!(st.min_density > density_floor)) throw DensityFloorViolation(st.min_density);
    return st;
}

void check_finite(const SpectralField& f, const char* what) {
    for (int c = 0; c < f.ncomp(); ++c)
        for (const cplx& v : f.comp(c))
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::runtime_error(std::string("nonlinearity: non-finite values in ") + what);
}

// axis-structured multiplier loops: no per-mode index arithmetic
template <class Body>
void for_each_mode(const GridSpec& g, const std::vector<double>& freq, Body&& body) {
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.n; ++i0)
        for (int i1 = 0; i1 < g.n; ++i1)
            for (int i2 = 0; i2 < g.n; ++i2, ++idx) body(idx, freq[i0], freq[i1], freq[i2]);
}

// out_c += i xi_j coeff * hat, divergence of a symmetric tensor entry (i,j)
void add_div_sym(SpectralField& out, const GridSpec& g, const std::vector<double>& freq,
                 std::span<const cplx> hat, int i, int j, double coeff) {
    cplx* oi = out.comp(i).data();
    cplx* oj = out.comp(j).data();
    for_each_mode(g, freq, [&](std::size_t n, double x0, double x1, double x2) {
        const double xi[3] = {x0, x1, x2};
        cplx v = cplx(0.0, coeff) * hat[n];
        oi[n] += xi[j] * v;
        if (i != j) oj[n] += xi[i] * v;
    });
}

void add_grad(SpectralField& out, const GridSpec& g, const std::vector<double>& freq,
              std::span<const cplx> hat, double coeff) {
    cplx* o0 = out.comp(0).data();
    cplx* o1 = out.comp(1).data();
    cplx* o2 = out.comp(2).data();
    for_each_mode(g, freq, [&](std::size_t n, double x0, double x1, double x2) {
        cplx v = cplx(0.0, coeff) * hat[n];
        o0[n] += x0 * v;
        o1[n] += x1 * v;
        o2[n] += x2 * v;
    });
}

}  // namespace

NonlinearityTerms eval_nonlinearity_terms(const FlowState& state, const PhysParams& params,
                                          const TransformEngine& engine,
                                          NonlinearityVariant variant, double density_floor) {
    const GridSpec& g = state.grid();
    const std::vector<double> freq = g.axis_frequencies();
    const double eps = params.eps;
    const double gamma = params.pressure.gamma;
    PhysicalStage st = to_physical(state, params, engine, density_floor);
    const std::size_t n = g.size();

    std::vector<double> iw(n), gw(n);
    for (std::size_t k = 0; k < n; ++k) {
        double b = eps * st.a[k];
        if (variant == NonlinearityVariant::full) {
            iw[k] = helper_i(b);
            gw[k] = helper_g(b, params.pressure);
        } else {
            iw[k] = b;
            gw[k] = 0.5 * (gamma - 1.0) * b * b;
        }
    }

    NonlinearityTerms t{SpectralField(g, FieldRank::vector3), SpectralField(g, FieldRank::vector3),
                        SpectralField(g, FieldRank::vector3), SpectralField(g, FieldRank::vector3),
                        SpectralField(g, FieldRank::vector3), SpectralField(g, FieldRank::vector3),
                        SpectralField(g, FieldRank::vector3)};
    std::vector<double> prod(n);
    std::vector<cplx> hat(n);

    // div((I - 1) m (x) m)
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            for (std::size_t k = 0; k < n; ++k) prod[k] = (iw[k] - 1.0) * st.m[i][k] * st.m[j][k];
            engine.forward(prod, hat);
            add_div_sym(t.convection, g, freq, hat, i, j, 1.0);
        }

    // -mu Lap(I m) and -(mu+lambda) grad div(I m)
    std::array<std::vector<cplx>, 3> imhat;
    for (int c = 0; c < 3; ++c) {
        imhat[c].resize(n);
        for (std::size_t k = 0; k < n; ++k) prod[k] = iw[k] * st.m[c][k];
        engine.forward(prod, imhat[c]);
    }
    for_each_mode(g, freq, [&](std::size_t k, double x0, double x1, double x2) {
        const double xi[3] = {x0, x1, x2};
        double r2 = x0 * x0 + x1 * x1 + x2 * x2;
        cplx div_im = 0.0;
        for (int c = 0; c < 3; ++c) div_im += xi[c] * imhat[c][k];
        for (int c = 0; c < 3; ++c) {
            t.visc_laplace.at(c, k) = params.mu * r2 * imhat[c][k];
            t.visc_graddiv.at(c, k) = (params.mu + params.lambda) * xi[c] * div_im;
        }
    });

    // -(1/eps) J(eps a) grad a = -(1/eps^2) grad G(eps a)
    engine.forward(gw, hat);
    add_grad(t.pressure, g, freq, hat, -1.0 / (eps * eps));

    // kappa eps^2 grad(a Lap a)
    for (std::size_t k = 0; k < n; ++k) prod[k] = st.a[k] * st.lap_a[k];
    engine.forward(prod, hat);
    add_grad(t.cap_a_lap, g, freq, hat, params.kappa * eps * eps);

    // grad a (x) grad a: tensor divergence and its trace
    std::vector<cplx> trace_hat(n, cplx(0.0));
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            for (std::size_t k = 0; k < n; ++k) prod[k] = st.grad_a[i][k] * st.grad_a[j][k];
            engine.forward(prod, hat);
            add_div_sym(t.cap_tensor, g, freq, hat, i, j, -params.kappa * eps * eps);
            if (i == j)
                for (std::size_t k = 0; k < n; ++k) trace_hat[k] += hat[k];
        }
    add_grad(t.cap_grad_sq, g, freq, trace_hat, 0.5 * params.kappa * eps * eps);

    for (int k = 0; k < NonlinearityTerms::count; ++k) {
        SpectralField& f = const_cast<SpectralField&>(t.term(k));
        dealias_truncate(f);
        check_finite(f, NonlinearityTerms::term_name(k));
    }
    return t;
}

SpectralField eval_nonlinearity(const FlowState& state, const PhysParams& params,
                                const TransformEngine& engine, NonlinearityVariant variant,
                                double density_floor) {
    const GridSpec& g = state.grid();
    const std::vector<double> freq = g.axis_frequencies();
    const double eps = params.eps;
    const double gamma = params.pressure.gamma;
    PhysicalStage st = to_physical(state, params, engine, density_floor);
    const std::size_t n = g.size();

    std::vector<double> iw(n), gw(n);
    for (std::size_t k = 0; k < n; ++k) {
        double b = eps * st.a[k];
        if (variant == NonlinearityVariant::full) {
            iw[k] = helper_i(b);
            gw[k] = helper_g(b, params.pressure);
        } else {
            iw[k] = b;
            gw[k] = 0.5 * (gamma - 1.0) * b * b;
        }
    }

    SpectralField out(g, FieldRank::vector3);
    std::vector<double> prod(n);
    std::vector<cplx> hat(n);

    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            // convection and capillary tensor in one pass over the pair
            for (std::size_t k = 0; k < n; ++k) prod[k] = (iw[k] - 1.0) * st.m[i][k] * st.m[j][k];
            engine.forward(prod, hat);
            add_div_sym(out, g, freq, hat, i, j, 1.0);
            for (std::size_t k = 0; k < n; ++k) prod[k] = st.grad_a[i][k] * st.grad_a[j][k];
            engine.forward(prod, hat);
            add_div_sym(out, g, freq, hat, i, j, -params.kappa * eps * eps);
            if (i == j)
                add_grad(out, g, freq, hat, 0.5 * params.kappa * eps * eps);
        }

    for (int c = 0; c < 3; ++c) {
        // -mu Lap(I m_c) and the c-column of -(mu+lambda) grad div(I m)
        for (std::size_t k = 0; k < n; ++k) prod[k] = iw[k] * st.m[c][k];
        engine.forward(prod, hat);
        cplx* o0 = out.comp(0).data();
        cplx* o1 = out.comp(1).data();
        cplx* o2 = out.comp(2).data();
        cplx* oc = out.comp(c).data();
        for_each_mode(g, freq, [&](std::size_t k, double x0, double x1, double x2) {
            const double xi[3] = {x0, x1, x2};
            double r2 = x0 * x0 + x1 * x1 + x2 * x2;
            oc[k] += params.mu * r2 * hat[k];
            cplx gd = (params.mu + params.lambda) * xi[c] * hat[k];
            o0[k] += x0 * gd;
            o1[k] += x1 * gd;
            o2[k] += x2 * gd;
        });
    }

    engine.forward(gw, hat);
    add_grad(out, g, freq, hat, -1.0 / (eps * eps));

    for (std::size_t k = 0; k < n; ++k) prod[k] = st.a[k] * st.lap_a[k];
    engine.forward(prod, hat);
    add_grad(out, g, freq, hat, params.kappa * eps * eps);

    dealias_truncate(out);
    check_finite(out, "total");
    return out;
}

AdmissibilityScan scan_admissibility(const FlowState& state, const PhysParams& params,
                                     const TransformEngine& engine) {
    const GridSpec& g = state.grid();
    std::vector<double> a(g.size());
    engine.inverse(state.a.comp(0), a);
    AdmissibilityScan s;
    s.min_density = 1.0 + params.eps * a[0];
    for (double v : a) {
        s.min_density = std::min(s.min_density, 1.0 + params.eps * v);
        s.max_eps_a = std::max(s.max_eps_a, std::abs(params.eps * v));
    }
    return s;
}

}  // namespace nskr
