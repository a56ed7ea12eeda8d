#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace dnls::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const std::complex<double>* p) {
    return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

bool aligned(const std::complex<double>* in, const std::complex<double>* out) {
    return fftw_alignment_of(const_cast<double*>(reinterpret_cast<const double*>(in))) == 0 &&
           fftw_alignment_of(const_cast<double*>(reinterpret_cast<const double*>(out))) == 0;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    // FFTW_ESTIMATE keeps plan choice (and therefore rounding) identical between runs.
    auto* a = as_fftw(static_cast<std::complex<double>*>(fftw_malloc(n * sizeof(fftw_complex))));
    auto* b = as_fftw(static_cast<std::complex<double>*>(fftw_malloc(n * sizeof(fftw_complex))));
    const int len = static_cast<int>(n);
    fwd_ = fftw_plan_dft_1d(len, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(len, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    fwd_any_ = fftw_plan_dft_1d(len, a, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_any_ = fftw_plan_dft_1d(len, a, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
}

Fft::~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_any_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_any_));
}

const Fft& Fft::of(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<Fft>> cache;
    std::lock_guard lock(planner_mutex());
    auto& slot = cache[n];
    if (!slot) slot.reset(new Fft(n));
    return *slot;
}

void Fft::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    const void* plan = aligned(in.data(), out.data()) ? fwd_ : fwd_any_;
    fftw_execute_dft(static_cast<fftw_plan>(const_cast<void*>(plan)), as_fftw(in.data()), as_fftw(out.data()));
}

void Fft::inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    const void* plan = aligned(in.data(), out.data()) ? bwd_ : bwd_any_;
    fftw_execute_dft(static_cast<fftw_plan>(const_cast<void*>(plan)), as_fftw(in.data()), as_fftw(out.data()));
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : out) v *= scale;
}

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> in) {
    std::vector<std::complex<double>> out(in.size());
    Fft::of(in.size()).forward(in, out);
    return out;
}

std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> in) {
    std::vector<std::complex<double>> out(in.size());
    Fft::of(in.size()).inverse(in, out);
    return out;
}

}  // namespace dnls::detail
