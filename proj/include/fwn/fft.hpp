#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace fwn {

/**
 * @brief Complex FFT: iterative radix-2 for power-of-two lengths, Bluestein's
 *        chirp-z reduction otherwise. Forward transform, no normalization:
 *        out[k] = sum_t in[t] * exp(-2*pi*i*k*t/n).
 */
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("Fft: length must be positive");
        if (is_pow2(n)) {
            init_radix2(n);
        } else {
            init_bluestein();
        }
    }

    std::size_t size() const { return n_; }

    /// In-place forward transform of a length-n buffer.
    void forward(std::complex<double>* data) const {
        if (chirp_.empty()) {
            radix2(data, n_, twiddle_, rev_);
        } else {
            bluestein(data);
        }
    }

private:
    using cd = std::complex<double>;

    static bool is_pow2(std::size_t n) { return (n & (n - 1)) == 0; }

    void init_radix2(std::size_t n) {
        twiddle_.resize(n / 2);
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double ang = -2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
            twiddle_[i] = cd(std::cos(ang), std::sin(ang));
        }
        rev_.resize(n);
        std::size_t bits = 0;
        while ((std::size_t{1} << bits) < n) ++bits;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
            rev_[i] = r;
        }
    }

    static void radix2(cd* a, std::size_t n, const std::vector<cd>& tw,
                       const std::vector<std::size_t>& rev) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i < rev[i]) std::swap(a[i], a[rev[i]]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t step = n / len;
            for (std::size_t i = 0; i < n; i += len) {
                for (std::size_t j = 0; j < len / 2; ++j) {
                    const cd w = tw[j * step];
                    const cd u = a[i + j];
                    const cd v = a[i + j + len / 2] * w;
                    a[i + j] = u + v;
                    a[i + j + len / 2] = u - v;
                }
            }
        }
    }

    void init_bluestein() {
        m_ = 1;
        while (m_ < 2 * n_ - 1) m_ <<= 1;
        chirp_.resize(n_);
        for (std::size_t t = 0; t < n_; ++t) {
            // angle = -pi * t^2 / n, computed mod 2n to keep the argument small
            const std::size_t t2 = (t * t) % (2 * n_);
            const double ang = -M_PI * static_cast<double>(t2) / static_cast<double>(n_);
            chirp_[t] = cd(std::cos(ang), std::sin(ang));
        }
        sub_twiddle_.resize(m_ / 2);
        for (std::size_t i = 0; i < m_ / 2; ++i) {
            const double ang = -2.0 * M_PI * static_cast<double>(i) / static_cast<double>(m_);
            sub_twiddle_[i] = cd(std::cos(ang), std::sin(ang));
        }
        sub_rev_.resize(m_);
        std::size_t bits = 0;
        while ((std::size_t{1} << bits) < m_) ++bits;
        for (std::size_t i = 0; i < m_; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
            sub_rev_[i] = r;
        }
        // Transform of the conjugate chirp, reused by every forward() call.
        bfilter_.assign(m_, cd(0.0, 0.0));
        bfilter_[0] = std::conj(chirp_[0]);
        for (std::size_t t = 1; t < n_; ++t) {
            bfilter_[t] = bfilter_[m_ - t] = std::conj(chirp_[t]);
        }
        radix2(bfilter_.data(), m_, sub_twiddle_, sub_rev_);
    }

    void bluestein(cd* data) const {
        std::vector<cd> a(m_, cd(0.0, 0.0));
        for (std::size_t t = 0; t < n_; ++t) a[t] = data[t] * chirp_[t];
        radix2(a.data(), m_, sub_twiddle_, sub_rev_);
        for (std::size_t i = 0; i < m_; ++i) a[i] *= bfilter_[i];
        // inverse FFT of length m via conjugation
        for (auto& x : a) x = std::conj(x);
        radix2(a.data(), m_, sub_twiddle_, sub_rev_);
        const double inv = 1.0 / static_cast<double>(m_);
        for (std::size_t k = 0; k < n_; ++k) {
            data[k] = std::conj(a[k]) * inv * chirp_[k];
        }
    }

    std::size_t n_;
    std::size_t m_ = 0;
    std::vector<cd> twiddle_;
    std::vector<std::size_t> rev_;
    std::vector<cd> chirp_;
    std::vector<cd> bfilter_;
    std::vector<cd> sub_twiddle_;
    std::vector<std::size_t> sub_rev_;
};

}  // namespace fwn
