#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rosenau {

/// Signed raw moments m_0..m_K of a finite measure, m_k = int v^k dmu.
/// Empty means unknown. Only orders up to kTrackedMomentOrder are carried
/// through the spectral pipeline.
using Moments = std::vector<double>;

inline constexpr int kTrackedMomentOrder = 4;

namespace moments {

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

/// Moments of the convolution of two measures.
inline Moments convolve(const Moments& a, const Moments& b) {
    if (a.empty() || b.empty())
        return {};
    const std::size_t n = std::min(a.size(), b.size());
    Moments out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j <= k; ++j)
            out[k] += binomial(static_cast<int>(k), static_cast<int>(j)) * a[j] * b[k - j];
    return out;
}

/// Moments of the measure with the given cumulants kappa_1..kappa_K (kappa_0
/// unused) and unit mass.
inline Moments from_cumulants(const std::vector<double>& kappa) {
    if (kappa.empty())
        return {};
    Moments m(kappa.size(), 0.0);
    m[0] = 1.0;
    for (std::size_t n = 1; n < kappa.size(); ++n) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
            acc += binomial(static_cast<int>(n - 1), static_cast<int>(j - 1)) * kappa[j] * m[n - j];
        m[n] = acc;
    }
    return m;
}

/// Moments of the push-forward under v -> a v.
inline Moments dilate(const Moments& m, double a) {
    Moments out(m.size());
    double p = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        out[k] = m[k] * p;
        p *= a;
    }
    return out;
}

inline Moments scale(const Moments& m, double c) {
    Moments out(m);
    for (double& x : out)
        x *= c;
    return out;
}

inline Moments add(const Moments& a, const Moments& b) {
    if (a.empty() || b.empty())
        return {};
    const std::size_t n = std::min(a.size(), b.size());
    Moments out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = a[k] + b[k];
    return out;
}

inline Moments dirac() { return Moments{1.0, 0.0, 0.0, 0.0, 0.0}; }

/// Centered Gaussian with the given variance.
inline Moments gaussian(double variance) {
    return Moments{1.0, 0.0, variance, 0.0, 3.0 * variance * variance};
}

} // namespace moments
} // namespace rosenau
