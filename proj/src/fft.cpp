#include "pcns/fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "pcns/errors.hpp"

namespace pcns {

void* fftw_alloc_bytes(std::size_t bytes) { return fftw_malloc(bytes); }
void fftw_free_bytes(void* p) noexcept { fftw_free(p); }

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

ComplexBuffer& scratch(std::size_t size) {
    thread_local ComplexBuffer buf;
    if (buf.size() < size) buf.resize(size);
    return buf;
}

} // namespace

int configured_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("PULSE_CNS_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1 && cap < hw) return static_cast<int>(cap);
    }
    return hw;
}

Fft::Fft(int n) : n_(n) {
    static bool threads_ready = [] {
        fftw_init_threads();
        return true;
    }();
    (void)threads_ready;
    fftw_plan_with_nthreads(configured_threads());

    const std::size_t nr = std::size_t(n) * n * n;
    const std::size_t nc = std::size_t(n) * n * (n / 2 + 1);
    double* r = fftw_alloc_real(nr);
    fftw_complex* c = fftw_alloc_complex(nc);
    fwd_ = fftw_plan_dft_r2c_3d(n, n, n, r, c, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_3d(n, n, n, c, r, FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
    fftw_free(r);
    fftw_free(c);
    if (!fwd_ || !inv_) throw Error("FFTW planning failed for n=" + std::to_string(n));
}

Fft::~Fft() {
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

const Fft& Fft::get(const Grid& g) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    static std::map<int, std::unique_ptr<Fft>> cache;
    auto it = cache.find(g.n);
    if (it == cache.end()) it = cache.emplace(g.n, std::unique_ptr<Fft>(new Fft(g.n))).first;
    return *it->second;
}

void Fft::forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    const std::size_t nc = std::size_t(n_) * n_ * (n_ / 2 + 1);
    const double s = 1.0 / (double(n_) * n_ * n_);
    for (std::size_t i = 0; i < nc; ++i) out[i] *= s;
}

void Fft::inverse(const cplx* in, double* out) const {
    const std::size_t nc = std::size_t(n_) * n_ * (n_ / 2 + 1);
    ComplexBuffer& tmp = scratch(nc);
    std::memcpy(static_cast<void*>(tmp.data()), in, nc * sizeof(cplx));
    inverse_destroy(tmp.data(), out);
}

void Fft::inverse_destroy(cplx* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inv_), reinterpret_cast<fftw_complex*>(in), out);
}

Spectrum forward(const ScalarField& f) {
    Spectrum s(f.grid);
    Fft::get(f.grid).forward(f.values.data(), s.coeffs.data());
    return s;
}

ScalarField inverse(const Spectrum& s) {
    ScalarField f(s.grid);
    Fft::get(s.grid).inverse(s.coeffs.data(), f.values.data());
    return f;
}

} // namespace pcns
