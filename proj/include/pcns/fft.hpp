#pragma once

#include "pcns/field.hpp"

namespace pcns {

/// Cached r2c/c2r plan pair for one grid size.
///
/// The forward transform carries the 1/n^3 factor, so the inverse is a plain
/// synthesis sum. Plans use FFTW_ESTIMATE, which keeps results bit-identical
/// across runs.
class Fft {
public:
    /// Returns the process-wide plan pair for g.n, creating it on first use.
    static const Fft& get(const Grid& g);

    void forward(const double* in, cplx* out) const;
    /// Input is left untouched (a scratch copy is transformed).
    void inverse(const cplx* in, double* out) const;
    /// Input is overwritten; avoids the scratch copy.
    void inverse_destroy(cplx* in, double* out) const;

    int n() const { return n_; }

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    ~Fft();

private:
    explicit Fft(int n);
    int n_;
    void* fwd_ = nullptr;
    void* inv_ = nullptr;
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/// Thread count used for FFTs: hardware concurrency capped by PULSE_CNS_THREADS.
int configured_threads();

} // namespace pcns
