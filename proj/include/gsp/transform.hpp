#pragma once

/// FFTW-backed spectral <-> physical transforms on a cubic collocation grid.
/// Conventions:
///   physical u(theta) = sum_n u_hat(n) exp(i n . theta),  theta_j = 2*pi*g_j/M
/// so spectral->physical is an unnormalized BACKWARD c2c DFT with the mode n
/// placed at grid index (n mod M), and physical->spectral is FORWARD / M^3.
/// The anisotropy scales a_i never enter the transform itself, only symbols.
///
/// For quadratic products of fields truncated at N the grid must satisfy
/// M >= 3N+1 for the retained cube to be alias-free.  Plans use FFTW_ESTIMATE
/// only (deterministic planning), single-threaded.

#include <fftw3.h>

#include <complex>
#include <stdexcept>
#include <vector>

#include "gsp/field.hpp"

namespace gsp {

/// Smallest 5-smooth integer >= m (FFT-friendly grid size).
inline int next_5smooth(int m) {
    auto smooth = [](int v) {
        for (int p : {2, 3, 5})
            while (v % p == 0) v /= p;
        return v == 1;
    };
    int v = m;
    while (!smooth(v)) ++v;
    return v;
}

/// Physical-space samples of a 4-component field on an M^3 grid,
/// component-major layout: values[c * M^3 + g].
struct PhysicalField4 {
    int grid = 0;
    std::vector<double> values;

    double& at(int c, std::size_t g) { return values[static_cast<std::size_t>(c) * gsize() + g]; }
    double at(int c, std::size_t g) const { return values[static_cast<std::size_t>(c) * gsize() + g]; }
    std::size_t gsize() const {
        const std::size_t m = static_cast<std::size_t>(grid);
        return m * m * m;
    }
};

class TransformEngine {
  public:
    TransformEngine(int N, int grid_size) : N_(N), M_(grid_size) {
        if (grid_size < 2 * N + 2)
            throw std::invalid_argument("TransformEngine: grid too small to hold the mode cube");
        const std::size_t g = gsize();
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * g));
        if (!buf_) throw std::bad_alloc();
        plan_bwd_ = fftw_plan_dft_3d(M_, M_, M_, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        plan_fwd_ = fftw_plan_dft_3d(M_, M_, M_, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        if (!plan_bwd_ || !plan_fwd_) throw std::runtime_error("TransformEngine: FFTW planning failed");
    }

    /// Grid adequate for exact quadratic (two-factor) convolutions at this N.
    static int dealias_grid(int N) { return next_5smooth(3 * N + 1); }

    ~TransformEngine() {
        fftw_destroy_plan(plan_bwd_);
        fftw_destroy_plan(plan_fwd_);
        fftw_free(buf_);
    }
    TransformEngine(const TransformEngine&) = delete;
    TransformEngine& operator=(const TransformEngine&) = delete;

    int grid() const { return M_; }
    int N() const { return N_; }
    std::size_t gsize() const {
        const std::size_t m = static_cast<std::size_t>(M_);
        return m * m * m;
    }

    /// Spectral -> physical for one component-stream of coefficients.
    /// `pick` maps a mode index to the complex coefficient.
    template <class Pick>
    void component_to_physical(const FreqLattice& lat, Pick&& pick, double* out) {
        const std::size_t g = gsize();
        for (std::size_t i = 0; i < g; ++i) buf_[i][0] = buf_[i][1] = 0.0;
        lat.for_each([&](std::size_t idx, const Int3& n) {
            const Cplx z = pick(idx);
            buf_[grid_index(n)][0] = z.real();
            buf_[grid_index(n)][1] = z.imag();
        });
        fftw_execute(plan_bwd_);
        for (std::size_t i = 0; i < g; ++i) out[i] = buf_[i][0];
    }

    /// Physical -> spectral; `put` receives (mode index, coefficient).
    template <class Put>
    void component_to_spectral(const FreqLattice& lat, const double* in, Put&& put) {
        const std::size_t g = gsize();
        for (std::size_t i = 0; i < g; ++i) {
            buf_[i][0] = in[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(plan_fwd_);
        const double inv = 1.0 / static_cast<double>(g);
        lat.for_each([&](std::size_t idx, const Int3& n) {
            const std::size_t gi = grid_index(n);
            put(idx, Cplx(buf_[gi][0] * inv, buf_[gi][1] * inv));
        });
    }

    PhysicalField4 to_physical(const SpectralField4& f) {
        PhysicalField4 p;
        p.grid = M_;
        p.values.resize(4 * gsize());
        for (int c = 0; c < 4; ++c)
            component_to_physical(f.lattice, [&](std::size_t idx) { return f.at(idx, c); },
                                  p.values.data() + static_cast<std::size_t>(c) * gsize());
        return p;
    }

    SpectralField4 to_spectral(const PhysicalField4& p, const FreqLattice& lat) {
        SpectralField4 f(lat);
        for (int c = 0; c < 4; ++c)
            component_to_spectral(lat, p.values.data() + static_cast<std::size_t>(c) * gsize(),
                                  [&](std::size_t idx, Cplx z) { f.at(idx, c) = z; });
        f.set({0, 0, 0}, C4{});
        return f;
    }

    std::size_t grid_index(const Int3& n) const {
        const int m = M_;
        const int g1 = ((n[0] % m) + m) % m;
        const int g2 = ((n[1] % m) + m) % m;
        const int g3 = ((n[2] % m) + m) % m;
        return (static_cast<std::size_t>(g1) * m + g2) * m + g3;
    }

  private:
    int N_, M_;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_bwd_ = nullptr, plan_fwd_ = nullptr;
};

}  // namespace gsp
