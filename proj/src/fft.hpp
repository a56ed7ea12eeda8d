#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dnls::detail {

// Thin wrapper over FFTW plans for one transform length. Plans are created
// once per length under a lock and shared; executing them is thread-safe
// because every call goes through the new-array execute interface.
class Fft {
public:
    static const Fft& of(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    // Unnormalized forward transform (sum x_k e^{-2 pi i jk/N}).
    void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
    // Inverse transform including the 1/N factor.
    void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    ~Fft();

private:
    explicit Fft(std::size_t n);
    std::size_t n_;
    // Plans for SIMD-aligned arrays and fallbacks for arbitrary ones.
    void* fwd_;
    void* bwd_;
    void* fwd_any_;
    void* bwd_any_;
};

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> in);
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> in);

}  // namespace dnls::detail
