#pragma once
#include <variant>

#include "orbital/mc.hpp"
#include "orbital/repformula.hpp"
#include "orbital/spectra.hpp"

namespace orbital {

using ModelSpec = std::variant<OrbitalModelSpec, DeformedBlockSpec, BandModelSpec>;

BlockHamiltonian sample_model(const ModelSpec& spec, RngStream& rng);
int model_total_dim(const ModelSpec& spec);

// Least-squares fit of log(mean) against distance.  Points with zero or
// negative mean are excluded; slope_stderr propagates per-point standard
// errors of the log-mean.
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_stderr = 0.0;
    int points = 0;
    bool degenerate = true;
};

DecayFit fit_log_decay(const std::vector<double>& x, const std::vector<MCEstimate>& est);

struct WegnerResult {
    MCEstimate count;
    double sum_nj = 0;
    double interval_length = 0;
    double ratio() const { return count.mean() / (sum_nj * interval_length); }
    double ratio_stderr() const { return count.stderr_mean() / (sum_nj * interval_length); }
};

WegnerResult run_wegner_experiment(const ModelSpec& spec, const Interval& I, int n_samples,
                                   std::uint64_t seed, bool parallel = true);

struct MinamiResult {
    MCEstimate factorial_moment;  // prod_{l<m} (N - l)
    MCEstimate tail_prob;         // 1{N >= m}
    MCEstimate count;             // plain N, for the m=1 consistency check
    int m = 1;
};

MinamiResult run_minami_experiment(const ModelSpec& spec, const Interval& I, int m, int n_samples,
                                   std::uint64_t seed, bool parallel = true);

enum class ProbeVector { e1, uniform_sphere };

struct FractionalMomentConfig {
    double s = 0.5;
    double lambda = 0.0;
    ProbeVector probe = ProbeVector::e1;
    // pairs of block indices to probe; empty means all ordered pairs,
    // grouped by l1 distance
    std::vector<std::pair<int, int>> pairs;
};

struct LocalisationResult {
    std::vector<double> distances;
    std::vector<MCEstimate> moments;
    DecayFit fit;
    long long redraws = 0;
    long long samples = 0;
    double redraw_fraction() const { return samples ? double(redraws) / samples : 0.0; }
};

LocalisationResult run_localisation_experiment(const OrbitalModelSpec& spec,
                                               const FractionalMomentConfig& cfg, int n_samples,
                                               std::uint64_t seed, bool parallel = true);

struct DosHistogram {
    std::vector<double> edges;          // size bins+1
    std::vector<MCEstimate> density;    // per-bin E N / (dim * width)
    MCEstimate binned_fraction;         // should be 1 when edges cover the spectrum
    double integral() const;
};

DosHistogram run_dos_histogram(const ModelSpec& spec, double lo, double hi, int bins,
                               int n_samples, std::uint64_t seed, bool parallel = true);

// Entrywise fractional moments of the band-matrix resolvent vs |i - j|.
// W must divide 2L+1 (sharp-cutoff hypothesis).
LocalisationResult run_band_localisation_experiment(const BandModelSpec& spec, double lambda,
                                                    double s, int n_samples, std::uint64_t seed,
                                                    bool parallel = true);

struct BandLocScanEntry {
    int W = 0;
    DecayFit fit;
};

std::vector<BandLocScanEntry> run_band_localisation_scan(int L, const std::vector<int>& Ws,
                                                         SymmetryClass sym, double lambda,
                                                         double s, int n_samples,
                                                         std::uint64_t seed, bool parallel = true);

struct TailResult {
    std::vector<double> t_grid;
    std::vector<MCEstimate> tail;  // P{||(A+V)^{-1} v|| >= t sqrt(N) ||v||}
    MCEstimate fractional_moment;  // E||(A+V)^{-1} v||^s
    double s = 0.5;
    std::vector<double> t_times_p() const;
};

TailResult run_single_block_tail(const Matrix& A, SymmetryClass sym,
                                 const std::vector<double>& t_grid, double s, int n_samples,
                                 std::uint64_t seed, bool parallel = true);

struct SmallBallResult {
    std::vector<double> eps_grid;
    std::vector<MCEstimate> prob;  // P{||A v|| <= eps / sqrt(N) ||A||_op}
};

SmallBallResult run_small_ball_check(const Matrix& A, SymmetryClass sym,
                                     const std::vector<double>& eps_grid, int n_samples,
                                     std::uint64_t seed, bool parallel = true);

struct LowerBoundResult {
    double s2 = 0;
    double t = 0;  // window length, t_fraction * s2
    double window_a = 0, window_b = 0;
    MCEstimate best_window_count;
    double bound_value = 0;  // sum N_j * t / (10 s2)
};

// Scans length-t windows of [-2 s2, 2 s2] (stride t/4) for the largest mean
// count; t = t_fraction * s2 with s2 estimated from the same realizations.
LowerBoundResult check_lower_bound(const ModelSpec& spec, double t_fraction, int n_samples,
                                   std::uint64_t seed, bool parallel = true);

struct PertShiftResult {
    std::vector<double> probes;
    std::vector<MCEstimate> shift;        // mean eigenvalue shift at each probe
    double fitted_coefficient = 0;        // slope of shift vs probe energy
    double fitted_coefficient_stderr = 0;
    double predicted_coefficient = 0;     // a^2 * coordination / (2N)
    double discard_rate = 0;
};

// Two-site geometry (coordination number 1): H(g) couples two independent
// GOE/GUE blocks by -g I with g = a / sqrt(N); tracks the block eigenvalue
// nearest each probe across the coupling switch-on.
PertShiftResult run_perturbation_shift_check(int N, double a, const std::vector<double>& probes,
                                             SymmetryClass sym, int n_samples, std::uint64_t seed,
                                             bool parallel = true);

}  // namespace orbital
