#pragma once

#include <complex>
#include <cstddef>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>

#include <fftw3.h>

namespace rosenau::fft {

namespace detail {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (data == nullptr)
            throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    fftw_complex* data;
};

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    // The FFTW planner is not thread-safe; execution of an existing plan on
    // fresh (equally aligned) arrays is.
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        FftwBuffer in(n), out(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, sign, FFTW_ESTIMATE);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void execute(std::span<std::complex<double>> data, int sign) {
    const std::size_t n = data.size();
    if (n == 0)
        return;
    fftw_plan plan = PlanCache::instance().get(n, sign);
    FftwBuffer in(n), out(n);
    std::memcpy(in.data, data.data(), sizeof(fftw_complex) * n);
    fftw_execute_dft(plan, in.data, out.data);
    std::memcpy(static_cast<void*>(data.data()), out.data, sizeof(fftw_complex) * n);
}

} // namespace detail

/// In place X_k = sum_j x_j exp(-2 pi i jk/N).
inline void forward(std::span<std::complex<double>> data) { detail::execute(data, FFTW_FORWARD); }

/// In place x_j = sum_k X_k exp(+2 pi i jk/N), unnormalized.
inline void backward(std::span<std::complex<double>> data) { detail::execute(data, FFTW_BACKWARD); }

} // namespace rosenau::fft
