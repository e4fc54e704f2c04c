#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

namespace rotbl::detail {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.backward);
        }
    }

    PlanPair get(int n, int howmany) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find({n, howmany});
        if (it != plans_.end()) return it->second;
        const int nc = n / 2 + 1;
        auto* r = static_cast<double*>(fftw_malloc(sizeof(double) * n * howmany));
        auto* c = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nc * howmany));
        PlanPair p;
        p.forward = fftw_plan_many_dft_r2c(1, &n, howmany, r, nullptr, howmany, 1, c, nullptr,
                                           howmany, 1, FFTW_ESTIMATE);
        p.backward = fftw_plan_many_dft_c2r(1, &n, howmany, c, nullptr, howmany, 1, r, nullptr,
                                            howmany, 1, FFTW_ESTIMATE);
        fftw_free(r);
        fftw_free(c);
        plans_.emplace(std::make_pair(n, howmany), p);
        return p;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

struct Buffers {
    double* r;
    fftw_complex* c;
    Buffers(int n, int howmany)
        : r(static_cast<double*>(fftw_malloc(sizeof(double) * n * howmany))),
          c(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1) * howmany))) {}
    ~Buffers() {
        fftw_free(r);
        fftw_free(c);
    }
    Buffers(const Buffers&) = delete;
    Buffers& operator=(const Buffers&) = delete;
};

}  // namespace

void spectral_multiply(const double* in, double* out, int n, int howmany,
                       const std::function<std::complex<double>(int)>& mult) {
    const PlanPair plan = cache().get(n, howmany);
    Buffers buf(n, howmany);
    std::copy(in, in + static_cast<std::size_t>(n) * howmany, buf.r);
    fftw_execute_dft_r2c(plan.forward, buf.r, buf.c);
    const int nc = n / 2 + 1;
    for (int k = 0; k < nc; ++k) {
        const std::complex<double> m = mult(k) / static_cast<double>(n);
        for (int j = 0; j < howmany; ++j) {
            auto* z = reinterpret_cast<std::complex<double>*>(buf.c[k * howmany + j]);
            *z *= m;
        }
    }
    fftw_execute_dft_c2r(plan.backward, buf.c, buf.r);
    std::copy(buf.r, buf.r + static_cast<std::size_t>(n) * howmany, out);
}

void forward(const double* in, std::complex<double>* out, int n, int howmany) {
    const PlanPair plan = cache().get(n, howmany);
    Buffers buf(n, howmany);
    std::copy(in, in + static_cast<std::size_t>(n) * howmany, buf.r);
    fftw_execute_dft_r2c(plan.forward, buf.r, buf.c);
    const std::size_t nc = static_cast<std::size_t>(n / 2 + 1) * howmany;
    for (std::size_t q = 0; q < nc; ++q) out[q] = std::complex<double>(buf.c[q][0], buf.c[q][1]) / double(n);
}

void backward(const std::complex<double>* in, double* out, int n, int howmany) {
    const PlanPair plan = cache().get(n, howmany);
    Buffers buf(n, howmany);
    const std::size_t nc = static_cast<std::size_t>(n / 2 + 1) * howmany;
    for (std::size_t q = 0; q < nc; ++q) {
        buf.c[q][0] = in[q].real();
        buf.c[q][1] = in[q].imag();
    }
    fftw_execute_dft_c2r(plan.backward, buf.c, buf.r);
    std::copy(buf.r, buf.r + static_cast<std::size_t>(n) * howmany, out);
}

double spectral_tail_ratio(const double* in, int n, int howmany) {
    const PlanPair plan = cache().get(n, howmany);
    Buffers buf(n, howmany);
    std::copy(in, in + static_cast<std::size_t>(n) * howmany, buf.r);
    fftw_execute_dft_r2c(plan.forward, buf.r, buf.c);
    const int nc = n / 2 + 1;
    double peak = 0.0;
    double tail = 0.0;
    for (int k = 0; k < nc; ++k) {
        for (int j = 0; j < howmany; ++j) {
            const double a = std::hypot(buf.c[k * howmany + j][0], buf.c[k * howmany + j][1]);
            peak = std::max(peak, a);
            if (4 * k >= 3 * (nc - 1)) tail = std::max(tail, a);
        }
    }
    return peak > 0.0 ? tail / peak : 0.0;
}

}  // namespace rotbl::detail
