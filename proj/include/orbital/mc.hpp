#pragma once
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace orbital {

// Mergeable Monte Carlo accumulator.  merge() is associative and commutative
// on the accumulators; reductions below always use the same pairwise tree so
// results are bit-identical regardless of worker count.
struct MCEstimate {
    long long n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        ++n;
        sum += x;
        sum_sq += x * x;
    }
    static MCEstimate merge(const MCEstimate& a, const MCEstimate& b) {
        return {a.n + b.n, a.sum + b.sum, a.sum_sq + b.sum_sq};
    }
    double mean() const {
        if (n < 1) throw std::logic_error("MCEstimate: empty");
        return sum / n;
    }
    double stderr_mean() const {
        if (n < 2) return 0.0;
        double m = mean();
        double var = (sum_sq / n - m * m) * n / (n - 1.0);
        return var > 0 ? std::sqrt(var / n) : 0.0;
    }
};

namespace detail {
template <class T, class Merge>
T tree_reduce(std::span<const T> v, const Merge& merge) {
    if (v.empty()) throw std::logic_error("tree_reduce: empty");
    if (v.size() == 1) return v[0];
    std::size_t mid = v.size() / 2;
    return merge(tree_reduce(v.subspan(0, mid), merge), tree_reduce(v.subspan(mid), merge));
}
}  // namespace detail

inline double tree_sum(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return detail::tree_reduce(v, [](double a, double b) { return a + b; });
}

inline MCEstimate tree_merge(std::span<const MCEstimate> v) {
    return detail::tree_reduce(v, &MCEstimate::merge);
}

// Accumulate one MCEstimate per statistic from per-sample rows.  Row i is
// produced by sample i; the reduction over samples is a fixed pairwise tree.
inline std::vector<MCEstimate> reduce_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    const std::size_t width = rows[0].size();
    std::vector<MCEstimate> out(width);
    for (std::size_t c = 0; c < width; ++c) {
        std::vector<MCEstimate> per_sample(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) per_sample[i].add(rows[i].at(c));
        out[c] = tree_merge(per_sample);
    }
    return out;
}

// Map nSamples independent work items (one RNG stream each) to rows of
// statistics.  `parallel` toggles the OpenMP loop; the output is identical
// either way because each sample owns stream index i and rows are stored by
// sample index.
template <class F>
std::vector<std::vector<double>> run_samples(int n_samples, const F& per_sample, bool parallel) {
    std::vector<std::vector<double>> rows(n_samples);
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_samples; ++i) rows[i] = per_sample(i);
    } else {
        for (int i = 0; i < n_samples; ++i) rows[i] = per_sample(i);
    }
    return rows;
}

}  // namespace orbital
