#include "orbital/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace orbital {

BlockHamiltonian sample_model(const ModelSpec& spec, RngStream& rng) {
    return std::visit(
        [&](const auto& s) -> BlockHamiltonian {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OrbitalModelSpec>)
                return build_orbital_hamiltonian(s, rng);
            else if constexpr (std::is_same_v<T, DeformedBlockSpec>)
                return build_deformed_block(s, rng);
            else
                return sample_band_matrix(s, rng);
        },
        spec);
}

int model_total_dim(const ModelSpec& spec) {
    return std::visit(
        [&](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OrbitalModelSpec>)
                return s.box.num_sites() * s.N;
            else if constexpr (std::is_same_v<T, DeformedBlockSpec>)
                return s.total_dim();
            else
                return s.box.num_sites();
        },
        spec);
}

DecayFit fit_log_decay(const std::vector<double>& x, const std::vector<MCEstimate>& est) {
    DecayFit fit;
    std::vector<double> xs, ys, dy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (est[i].n < 1) continue;
        double m = est[i].mean();
        if (!(m > 0)) continue;
        xs.push_back(x[i]);
        ys.push_back(std::log(m));
        dy.push_back(est[i].stderr_mean() / m);  // stderr of log-mean, delta method
    }
    fit.points = static_cast<int>(xs.size());
    if (fit.points < 3) return fit;

    double xbar = 0, ybar = 0;
    for (int i = 0; i < fit.points; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= fit.points;
    ybar /= fit.points;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < fit.points; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        syy += (ys[i] - ybar) * (ys[i] - ybar);
    }
    if (sxx == 0 || syy == 0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.r_squared = (sxy * sxy) / (sxx * syy);
    double var = 0;
    for (int i = 0; i < fit.points; ++i) {
        double c = (xs[i] - xbar) / sxx;
        var += c * c * dy[i] * dy[i];
    }
    fit.slope_stderr = std::sqrt(var);
    fit.degenerate = false;
    return fit;
}

WegnerResult run_wegner_experiment(const ModelSpec& spec, const Interval& I, int n_samples,
                                   std::uint64_t seed, bool parallel) {
    if (n_samples < 2) throw std::invalid_argument("run_wegner_experiment: need >= 2 samples");
    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            BlockHamiltonian H = sample_model(spec, rng);
            Spectrum s = eig_hermitian(H);
            return std::vector<double>{static_cast<double>(count_in_interval(s, I))};
        },
        parallel);
    WegnerResult r;
    r.count = reduce_rows(rows)[0];
    r.sum_nj = model_total_dim(spec);
    r.interval_length = I.length();
    return r;
}

MinamiResult run_minami_experiment(const ModelSpec& spec, const Interval& I, int m, int n_samples,
                                   std::uint64_t seed, bool parallel) {
    if (m < 1) throw std::invalid_argument("run_minami_experiment: m must be >= 1");
    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            BlockHamiltonian H = sample_model(spec, rng);
            int n = count_in_interval(eig_hermitian(H), I);
            double prod = 1.0;
            for (int l = 0; l < m; ++l) prod *= (n - l);
            if (n < m) prod = 0.0;  // falling factorial vanishes below m
            return std::vector<double>{prod, n >= m ? 1.0 : 0.0, static_cast<double>(n)};
        },
        parallel);
    auto est = reduce_rows(rows);
    MinamiResult r;
    r.factorial_moment = est[0];
    r.tail_prob = est[1];
    r.count = est[2];
    r.m = m;
    return r;
}

namespace {

Vector sphere_vector(int n, bool complex_case, RngStream& rng) {
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = complex_case ? std::complex<double>(rng.normal(), rng.normal())
                            : std::complex<double>(rng.normal(), 0.0);
    return v / v.norm();
}

}  // namespace

LocalisationResult run_localisation_experiment(const OrbitalModelSpec& spec,
                                               const FractionalMomentConfig& cfg, int n_samples,
                                               std::uint64_t seed, bool parallel) {
    if (!(cfg.s > 0 && cfg.s < 1))
        throw std::invalid_argument("run_localisation_experiment: need 0 < s < 1");
    const int ns = spec.box.num_sites();
    const int N = spec.N;

    // distance classes: either user pairs, or all ordered pairs grouped by l1 distance
    std::vector<std::vector<std::pair<int, int>>> classes;
    std::vector<double> distances;
    if (cfg.pairs.empty()) {
        int maxd = 0;
        for (int x = 0; x < ns; ++x)
            for (int y = 0; y < ns; ++y)
                maxd = std::max(maxd, LatticeBox::l1_distance(spec.box.site(x), spec.box.site(y)));
        classes.resize(maxd + 1);
        for (int x = 0; x < ns; ++x)
            for (int y = 0; y < ns; ++y)
                classes[LatticeBox::l1_distance(spec.box.site(x), spec.box.site(y))].push_back(
                    {x, y});
        for (int d = 0; d <= maxd; ++d) distances.push_back(d);
    } else {
        for (auto& p : cfg.pairs) {
            classes.push_back({p});
            distances.push_back(
                LatticeBox::l1_distance(spec.box.site(p.first), spec.box.site(p.second)));
        }
    }

    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            Vector v = cfg.probe == ProbeVector::e1
                           ? Vector::Unit(N, 0).eval()
                           : sphere_vector(N, spec.symmetry == SymmetryClass::unitary, rng);
            long redraws = 0;
            Matrix G;
            while (true) {
                BlockHamiltonian H = build_orbital_hamiltonian(spec, rng);
                try {
                    G = resolvent_full(H, cfg.lambda);
                    break;
                } catch (const SingularityError&) {
                    if (++redraws > 50)
                        throw std::runtime_error("localisation: persistent singular draws");
                    RngStream sub = rng.substream(redraws);
                    rng = sub;
                }
            }
            std::vector<double> row;
            row.reserve(classes.size() + 1);
            for (const auto& cls : classes) {
                double acc = 0;
                for (auto [x, y] : cls)
                    acc += std::pow((G.block(x * N, y * N, N, N) * v).norm(), cfg.s);
                row.push_back(cls.empty() ? 0.0 : acc / cls.size());
            }
            row.push_back(static_cast<double>(redraws));
            return row;
        },
        parallel);

    auto est = reduce_rows(rows);
    LocalisationResult r;
    r.distances = distances;
    r.moments.assign(est.begin(), est.end() - 1);
    r.samples = n_samples;
    r.redraws = static_cast<long long>(est.back().sum);
    // fit over strictly positive distances
    std::vector<double> fx;
    std::vector<MCEstimate> fe;
    for (std::size_t i = 0; i < r.distances.size(); ++i)
        if (r.distances[i] > 0) {
            fx.push_back(r.distances[i]);
            fe.push_back(r.moments[i]);
        }
    r.fit = fit_log_decay(fx, fe);
    return r;
}

double DosHistogram::integral() const {
    double s = 0;
    for (std::size_t i = 0; i < density.size(); ++i)
        s += density[i].mean() * (edges[i + 1] - edges[i]);
    return s;
}

DosHistogram run_dos_histogram(const ModelSpec& spec, double lo, double hi, int bins,
                               int n_samples, std::uint64_t seed, bool parallel) {
    if (!(lo < hi) || bins < 1) throw std::invalid_argument("run_dos_histogram: bad bin layout");
    const int dim = model_total_dim(spec);
    const double width = (hi - lo) / bins;
    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            BlockHamiltonian H = sample_model(spec, rng);
            Spectrum s = eig_hermitian(H);
            std::vector<double> row(bins + 1, 0.0);
            int inside = 0;
            for (int e = 0; e < s.dim(); ++e) {
                double ev = s.eigenvalues(e);
                if (ev < lo || ev >= hi) continue;
                int b = std::min(bins - 1, static_cast<int>((ev - lo) / width));
                row[b] += 1.0 / (dim * width);
                ++inside;
            }
            row[bins] = static_cast<double>(inside) / dim;
            return row;
        },
        parallel);
    auto est = reduce_rows(rows);
    DosHistogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + b * width;
    h.density.assign(est.begin(), est.end() - 1);
    h.binned_fraction = est.back();
    return h;
}

LocalisationResult run_band_localisation_experiment(const BandModelSpec& spec, double lambda,
                                                    double s, int n_samples, std::uint64_t seed,
                                                    bool parallel) {
    if (!(s > 0 && s < 1))
        throw std::invalid_argument("run_band_localisation_experiment: need 0 < s < 1");
    if (spec.box.d != 1)
        throw std::invalid_argument("run_band_localisation_experiment: d = 1 only");
    if (spec.shape.kind() != ShapeFunction::Kind::sharp_cutoff)
        throw std::invalid_argument("run_band_localisation_experiment: sharp cutoff shape required");
    const int side = spec.box.side();
    if (side % spec.shape.bandwidth() != 0)
        throw std::invalid_argument("run_band_localisation_experiment: W must divide 2L+1");

    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            long redraws = 0;
            Matrix G;
            while (true) {
                BlockHamiltonian H = sample_band_matrix(spec, rng);
                try {
                    G = resolvent_full(H, lambda);
                    break;
                } catch (const SingularityError&) {
                    if (++redraws > 50) throw std::runtime_error("bandloc: persistent singular draws");
                    rng = rng.substream(redraws);
                }
            }
            std::vector<double> row(side + 1, 0.0);
            std::vector<int> counts(side, 0);
            for (int a = 0; a < side; ++a)
                for (int b = 0; b < side; ++b) {
                    int d = std::abs(a - b);
                    row[d] += std::pow(std::abs(G(a, b)), s);
                    ++counts[d];
                }
            for (int d = 0; d < side; ++d) row[d] /= counts[d];
            row[side] = static_cast<double>(redraws);
            return row;
        },
        parallel);

    auto est = reduce_rows(rows);
    LocalisationResult r;
    for (int d = 0; d < side; ++d) r.distances.push_back(d);
    r.moments.assign(est.begin(), est.end() - 1);
    r.samples = n_samples;
    r.redraws = static_cast<long long>(est.back().sum);
    std::vector<double> fx;
    std::vector<MCEstimate> fe;
    for (std::size_t i = 0; i < r.distances.size(); ++i)
        if (r.distances[i] > 0) {
            fx.push_back(r.distances[i]);
            fe.push_back(r.moments[i]);
        }
    r.fit = fit_log_decay(fx, fe);
    return r;
}

std::vector<BandLocScanEntry> run_band_localisation_scan(int L, const std::vector<int>& Ws,
                                                         SymmetryClass sym, double lambda,
                                                         double s, int n_samples,
                                                         std::uint64_t seed, bool parallel) {
    std::vector<BandLocScanEntry> out;
    for (std::size_t wi = 0; wi < Ws.size(); ++wi) {
        BandModelSpec spec{LatticeBox(1, L), ShapeFunction::sharp_cutoff(Ws[wi]), sym};
        auto res = run_band_localisation_experiment(spec, lambda, s, n_samples,
                                                    seed + 1000 * wi, parallel);
        out.push_back({Ws[wi], res.fit});
    }
    return out;
}

std::vector<double> TailResult::t_times_p() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < t_grid.size(); ++i) out.push_back(t_grid[i] * tail[i].mean());
    return out;
}

TailResult run_single_block_tail(const Matrix& A, SymmetryClass sym,
                                 const std::vector<double>& t_grid, double s, int n_samples,
                                 std::uint64_t seed, bool parallel) {
    for (double t : t_grid)
        if (t < 1.0) throw std::invalid_argument("run_single_block_tail: t grid must be >= 1");
    const int N = static_cast<int>(A.rows());
    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            Matrix M = A;
            if (sym == SymmetryClass::orthogonal)
                M += sample_goe(N, rng).cast<std::complex<double>>();
            else
                M += sample_gue(N, rng);
            Vector v = Vector::Unit(N, 0);
            Vector w = Eigen::PartialPivLU<Matrix>(M).solve(v);
            double r = w.norm() / std::sqrt(static_cast<double>(N));
            std::vector<double> row;
            for (double t : t_grid) row.push_back(r >= t ? 1.0 : 0.0);
            row.push_back(std::pow(w.norm(), s));
            return row;
        },
        parallel);
    auto est = reduce_rows(rows);
    TailResult r;
    r.t_grid = t_grid;
    r.tail.assign(est.begin(), est.end() - 1);
    r.fractional_moment = est.back();
    r.s = s;
    return r;
}

SmallBallResult run_small_ball_check(const Matrix& A, SymmetryClass sym,
                                     const std::vector<double>& eps_grid, int n_samples,
                                     std::uint64_t seed, bool parallel) {
    if (A.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("run_small_ball_check: A must be nonzero");
    const int N = static_cast<int>(A.rows());
    const double anorm = operator_norm(A);
    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            Vector v = sphere_vector(N, sym == SymmetryClass::unitary, rng);
            double r = (A * v).norm() * std::sqrt(static_cast<double>(N)) / anorm;
            std::vector<double> row;
            for (double eps : eps_grid) row.push_back(r <= eps ? 1.0 : 0.0);
            return row;
        },
        parallel);
    auto est = reduce_rows(rows);
    SmallBallResult r;
    r.eps_grid = eps_grid;
    r.prob = est;
    return r;
}

LowerBoundResult check_lower_bound(const ModelSpec& spec, double t_fraction, int n_samples,
                                   std::uint64_t seed, bool parallel) {
    if (!(t_fraction > 0 && t_fraction < 1))
        throw std::invalid_argument("check_lower_bound: need 0 < t_fraction < 1");
    const int dim = model_total_dim(spec);
    // store the spectrum of every realization, then scan windows
    std::vector<Eigen::VectorXd> spectra(n_samples);
    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            BlockHamiltonian H = sample_model(spec, rng);
            spectra[i] = eig_hermitian(H).eigenvalues;
            return std::vector<double>{spectra[i].squaredNorm()};  // tr H^2
        },
        parallel);
    double s2 = std::sqrt(reduce_rows(rows)[0].mean() / dim);
    const double t = t_fraction * s2;

    LowerBoundResult best;
    best.s2 = s2;
    best.t = t;
    best.bound_value = dim * t / (10.0 * s2);
    double start = -2.0 * s2;
    bool first = true;
    while (start + t <= 2.0 * s2 + 1e-12) {
        Interval win(start, start + t);
        std::vector<MCEstimate> per(n_samples);
        for (int i = 0; i < n_samples; ++i)
            per[i].add(static_cast<double>(count_in_interval(spectra[i], win)));
        MCEstimate est = tree_merge(per);
        if (first || est.mean() > best.best_window_count.mean()) {
            best.best_window_count = est;
            best.window_a = win.a;
            best.window_b = win.b;
            first = false;
        }
        start += t / 4.0;
    }
    return best;
}

PertShiftResult run_perturbation_shift_check(int N, double a, const std::vector<double>& probes,
                                             SymmetryClass sym, int n_samples, std::uint64_t seed,
                                             bool parallel) {
    if (N < 2) throw std::invalid_argument("run_perturbation_shift_check: N must be >= 2");
    const double g = a / std::sqrt(static_cast<double>(N));
    const double guard = 10.0 * (a * a + 1e-12) / N;  // tracking ambiguity threshold
    const int np = static_cast<int>(probes.size());

    auto rows = run_samples(
        n_samples,
        [&](int i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            Matrix v0 = sym == SymmetryClass::orthogonal
                            ? Matrix(sample_goe(N, rng).cast<std::complex<double>>())
                            : sample_gue(N, rng);
            Matrix v1 = sym == SymmetryClass::orthogonal
                            ? Matrix(sample_goe(N, rng).cast<std::complex<double>>())
                            : sample_gue(N, rng);
            Matrix H = Matrix::Zero(2 * N, 2 * N);
            H.topLeftCorner(N, N) = v0;
            H.bottomRightCorner(N, N) = v1;
            H.topRightCorner(N, N) = -g * Matrix::Identity(N, N);
            H.bottomLeftCorner(N, N) = -g * Matrix::Identity(N, N);

            Eigen::VectorXd e0 = eig_hermitian(v0).eigenvalues;
            Eigen::VectorXd e1 = eig_hermitian(v1).eigenvalues;
            Eigen::VectorXd eg = eig_hermitian(H).eigenvalues;

            // row: (shift, used) per probe
            std::vector<double> row(2 * np, 0.0);
            for (int p = 0; p < np; ++p) {
                int j = 0;
                for (int q = 1; q < N; ++q)
                    if (std::abs(e0(q) - probes[p]) < std::abs(e0(j) - probes[p])) j = q;
                double lam = e0(j);
                // discard when another unperturbed level is too close to track reliably
                double gap = std::numeric_limits<double>::max();
                for (int q = 0; q < N; ++q) {
                    if (q != j) gap = std::min(gap, std::abs(e0(q) - lam));
                    gap = std::min(gap, std::abs(e1(q) - lam));
                }
                if (gap < guard) continue;
                double nearest = eg(0);
                for (int q = 1; q < 2 * N; ++q)
                    if (std::abs(eg(q) - lam) < std::abs(nearest - lam)) nearest = eg(q);
                row[2 * p] = nearest - lam;
                row[2 * p + 1] = 1.0;
            }
            return row;
        },
        parallel);

    PertShiftResult r;
    r.probes = probes;
    // Second-order shift g^2 <psi, (mu - V')^{-1} psi> averages to g^2 m(mu)
    // with m the semicircle Stieltjes transform, m(mu) = mu/2 in the bulk;
    // slope in the probe energy is a^2 * coordination / (2N), coordination 1.
    r.predicted_coefficient = a * a / (2.0 * N);
    long long used_total = 0;
    // conditional mean shift per probe: sum(shift) / sum(used)
    std::vector<double> mean_shift(np), mean_err(np);
    {
        auto est = reduce_rows(rows);
        for (int p = 0; p < np; ++p) {
            const MCEstimate& sh = est[2 * p];
            const MCEstimate& used = est[2 * p + 1];
            long long nu = static_cast<long long>(used.sum);
            used_total += nu;
            MCEstimate cond;
            cond.n = std::max<long long>(nu, 1);
            cond.sum = sh.sum;
            cond.sum_sq = sh.sum_sq;
            r.shift.push_back(cond);
            mean_shift[p] = cond.mean();
            mean_err[p] = cond.stderr_mean();
        }
        r.discard_rate = 1.0 - static_cast<double>(used_total) / (static_cast<double>(np) * n_samples);
    }

    // slope of mean shift vs probe energy
    double xbar = 0, ybar = 0;
    for (int p = 0; p < np; ++p) {
        xbar += probes[p];
        ybar += mean_shift[p];
    }
    xbar /= np;
    ybar /= np;
    double sxx = 0, sxy = 0, var = 0;
    for (int p = 0; p < np; ++p) {
        sxx += (probes[p] - xbar) * (probes[p] - xbar);
        sxy += (probes[p] - xbar) * (mean_shift[p] - ybar);
    }
    if (sxx > 0) {
        r.fitted_coefficient = sxy / sxx;
        for (int p = 0; p < np; ++p) {
            double c = (probes[p] - xbar) / sxx;
            var += c * c * mean_err[p] * mean_err[p];
        }
        r.fitted_coefficient_stderr = std::sqrt(var);
    }
    return r;
}

}  // namespace orbital
