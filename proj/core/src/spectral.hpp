#pragma once

#include <complex>
#include <functional>

namespace rotbl::detail {

/// Applies a multiplier m(k), k = 0..n/2, to the real DFT of `howmany` sequences of length n
/// stored interleaved (element i of sequence j at in[i * howmany + j]). `in` and `out` may alias.
void spectral_multiply(const double* in, double* out, int n, int howmany,
                       const std::function<std::complex<double>(int)>& mult);

/// Normalised forward transform: out[k * howmany + j], k = 0..n/2, so a constant c maps to c at k = 0.
void forward(const double* in, std::complex<double>* out, int n, int howmany);
/// Inverse of `forward`.
void backward(const std::complex<double>* in, double* out, int n, int howmany);

/// Largest modulus among the top quarter of wavenumbers relative to the largest modulus overall,
/// maximised across sequences. Used to detect unresolved data.
double spectral_tail_ratio(const double* in, int n, int howmany);

/// Solves tridiagonal systems a[i] x[i-1] + b[i] x[i] + c[i] x[i+1] = d[i] (Thomas algorithm).
/// Works in place on d; b is used as scratch.
template <typename T>
void solve_tridiagonal(const double* a, double* b, const double* c, T* d, int n) {
    for (int i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (int i = n - 2; i >= 0; --i) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

}  // namespace rotbl::detail
