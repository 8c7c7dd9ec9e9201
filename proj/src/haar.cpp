#include "dynreg/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace dynreg {

std::size_t log2_exact(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("log2_exact: length is not a power of two");
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

DenseMatrix haar_matrix(std::size_t n) {
    if (n > 12) throw std::invalid_argument("haar_matrix: order too large for dense use");
    DenseMatrix h(1, 1);
    h(0, 0) = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t half = std::size_t{1} << (k - 1);
        const std::size_t m = half * 2;
        DenseMatrix next(m, m);
        for (std::size_t i = 0; i < half; ++i) {
            for (std::size_t j = 0; j < half; ++j) {
                next(2 * i, j) = h(i, j);
                next(2 * i + 1, j) = h(i, j);
            }
            next(2 * i, half + i) = 1.0;
            next(2 * i + 1, half + i) = -1.0;
        }
        h = std::move(next);
    }
    return h;
}

void haar_transpose_apply(std::span<const double> v, std::span<double> y) {
    const std::size_t T = v.size();
    log2_exact(T);
    if (y.size() != T) throw std::invalid_argument("haar_transpose_apply: size mismatch");
    std::vector<double> work(v.begin(), v.end());
    std::size_t m = T;
    while (m > 1) {
        const std::size_t half = m / 2;
        for (std::size_t i = 0; i < half; ++i) {
            const double a = work[2 * i];
            const double b = work[2 * i + 1];
            y[half + i] = a - b;
            work[i] = a + b;
        }
        m = half;
    }
    y[0] = work[0];
}

void haar_apply(std::span<const double> c, std::span<double> y) {
    const std::size_t T = c.size();
    log2_exact(T);
    if (y.size() != T) throw std::invalid_argument("haar_apply: size mismatch");
    std::vector<double> work(T);
    work[0] = c[0];
    std::size_t m = 1;
    while (m < T) {
        // expand: block coefficients at [m, 2m) split each current entry
        for (std::size_t i = m; i-- > 0;) {
            const double a = work[i];
            const double b = c[m + i];
            work[2 * i] = a + b;
            work[2 * i + 1] = a - b;
        }
        m *= 2;
    }
    for (std::size_t i = 0; i < T; ++i) y[i] = work[i];
}

std::vector<SparseEntry> haar_row(std::size_t t, std::size_t n) {
    const std::size_t T = std::size_t{1} << n;
    if (t >= T) throw std::out_of_range("haar_row: row index out of range");
    // Unrolled recursion: level k contributes column 2^{k-1} + floor(t/2^{n-k+1})
    // with the sign of t's bit at that level; column 0 is the all-ones vector.
    std::vector<SparseEntry> entries(n + 1);
    entries[0] = {0, 1.0};
    std::size_t tt = t;
    for (std::size_t k = n; k >= 1; --k) {
        const double sign = (tt % 2 == 0) ? 1.0 : -1.0;
        tt /= 2;
        entries[k] = {(std::size_t{1} << (k - 1)) + tt, sign};
    }
    return entries;
}

double hht_diag(std::size_t n) {
    return static_cast<double>(1 + n);
}

double haar_scale_sq(std::size_t column, std::size_t n) {
    const std::size_t T = std::size_t{1} << n;
    if (column >= T) throw std::out_of_range("haar_scale_sq: column out of range");
    if (column == 0) return static_cast<double>(T);
    std::size_t k = 0;
    while ((std::size_t{2} << k) <= column) ++k;  // k = floor(log2(column))
    return static_cast<double>(T >> k);
}

TimescalePartition::TimescalePartition(std::size_t T, std::size_t tau_in) : tau(tau_in) {
    if (tau == 0 || (tau & (tau - 1)) != 0 || tau > T || T % tau != 0)
        throw std::invalid_argument("TimescalePartition: invalid timescale");
    for (std::size_t b = 0; b < T; b += tau) intervals.emplace_back(b, b + tau);
}

double haar_comparator_norm_sq(const ComparatorSeq& seq) {
    if (seq.empty()) throw std::invalid_argument("haar_comparator_norm_sq: empty sequence");
    const std::size_t T = seq.size();
    const std::size_t n = log2_exact(T);
    const std::size_t d = seq.front().size();
    std::vector<double> series(T), coeff(T);
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t t = 0; t < T; ++t) {
            if (seq[t].size() != d)
                throw std::invalid_argument("haar_comparator_norm_sq: ragged sequence");
            series[t] = seq[t][j];
        }
        haar_transpose_apply(series, coeff);
        for (std::size_t p = 0; p < T; ++p) {
            const double c = coeff[p] / haar_scale_sq(p, n);
            total += c * c;
        }
    }
    return total;
}

double timescale_path_length(const ComparatorSeq& seq, std::size_t tau) {
    if (seq.empty()) throw std::invalid_argument("timescale_path_length: empty sequence");
    const std::size_t T = seq.size();
    TimescalePartition part(T, tau);
    const std::size_t d = seq.front().size();
    const std::size_t cells = part.intervals.size();

    std::vector<std::vector<double>> avg(cells, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < cells; ++i) {
        const auto [b, e] = part.intervals[i];
        for (std::size_t t = b; t < e; ++t)
            for (std::size_t j = 0; j < d; ++j) avg[i][j] += seq[t][j];
        for (std::size_t j = 0; j < d; ++j) avg[i][j] /= static_cast<double>(tau);
    }

    if (tau == T) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += avg[0][j] * avg[0][j];
        return acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cells; i += 2) {
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = avg[i][j] - avg[i + 1][j];
            acc += diff * diff;
        }
    }
    return acc;
}

}  // namespace dynreg
