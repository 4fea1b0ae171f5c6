#include "orbital/experiments.hpp"

#include <cmath>
#include <iostream>

#include "orbital/walk_expansion.hpp"

namespace orbital {

namespace {

SymmetryClass symmetry_from(const ExperimentConfig& cfg) {
    return cfg.get("symmetry") == "unitary" ? SymmetryClass::unitary : SymmetryClass::orthogonal;
}

OrbitalModelSpec orbital_from(const ExperimentConfig& cfg) {
    OrbitalModelSpec spec;
    spec.box = LatticeBox(static_cast<int>(cfg.get_int("model.d")),
                          static_cast<int>(cfg.get_int("model.L")));
    spec.N = static_cast<int>(cfg.get_int("model.N"));
    spec.g = cfg.get_real("model.g");
    spec.symmetry = symmetry_from(cfg);
    spec.kind = cfg.get("model.kind") == "blockAnderson" ? OrbitalKind::block_anderson
                                                         : OrbitalKind::wegner_orbital;
    return spec;
}

Matrix fixed_deformation(int dim, SymmetryClass sym, const std::string& kind, double scale,
                         std::uint64_t seed) {
    if (kind == "zero") return Matrix::Zero(dim, dim);
    if (kind != "gaussian") throw std::invalid_argument("h0.kind must be zero or gaussian");
    RngStream rng(seed, 0);
    if (sym == SymmetryClass::orthogonal)
        return scale * sample_goe(dim, rng).cast<std::complex<double>>();
    return scale * sample_gue(dim, rng);
}

DeformedBlockSpec deformed_from(const ExperimentConfig& cfg) {
    DeformedBlockSpec spec;
    spec.block_sizes = cfg.get_int_list("blocks");
    spec.symmetry = symmetry_from(cfg);
    spec.H0 = fixed_deformation(spec.total_dim(), spec.symmetry, cfg.get("h0.kind"),
                                cfg.get_real("h0.scale"),
                                static_cast<std::uint64_t>(cfg.get_int("h0.seed")));
    return spec;
}

BandModelSpec band_from(const ExperimentConfig& cfg, int W) {
    return BandModelSpec{LatticeBox(1, static_cast<int>(cfg.get_int("model.L"))),
                         ShapeFunction::sharp_cutoff(W), symmetry_from(cfg)};
}

Json estimate_json(const MCEstimate& e) {
    return Json{{"mean", e.mean()}, {"stderr", e.stderr_mean()}, {"n", e.n}};
}

Json fit_json(const DecayFit& f) {
    return Json{{"slope", f.slope},           {"intercept", f.intercept},
                {"r_squared", f.r_squared},   {"slope_stderr", f.slope_stderr},
                {"points", f.points},         {"degenerate", f.degenerate}};
}

Json meta_json(const ExperimentConfig& cfg) {
    Json config = Json::object();
    for (const auto& [k, v] : cfg.values) config[k] = v;
    return Json{{"schema_version", ResultRecord::schema_version},
                {"experiment", cfg.experiment},
                {"config", config}};
}

void estimate_row(ResultRecord& rec, std::initializer_list<double> nums, const MCEstimate& e) {
    std::vector<std::string> row;
    for (double v : nums) row.push_back(format_number(v));
    row.push_back(format_number(e.mean()));
    row.push_back(format_number(e.stderr_mean()));
    row.push_back(std::to_string(e.n));
    rec.csv_rows.push_back(std::move(row));
}

}  // namespace

ModelSpec model_from_config(const ExperimentConfig& cfg) {
    std::string family =
        cfg.values.count("model.family") ? cfg.get("model.family") : std::string("orbital");
    if (family == "deformedBlock") return deformed_from(cfg);
    if (family == "band") return band_from(cfg, static_cast<int>(cfg.get_int("model.W")));
    return orbital_from(cfg);
}

ResultRecord run_experiment(const ExperimentConfig& cfg) {
    ResultRecord rec;
    rec.meta = meta_json(cfg);
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    const int samples = static_cast<int>(cfg.get_int("samples"));
    const std::string& exp = cfg.experiment;

    if (exp == "wegner") {
        Interval I(cfg.get_real("interval.a"), cfg.get_real("interval.b"));
        auto r = run_wegner_experiment(model_from_config(cfg), I, samples, seed);
        rec.csv_header = {"interval_a", "interval_b", "mean", "stderr", "n"};
        estimate_row(rec, {I.a, I.b}, r.count);
        rec.points.push_back(Json{{"interval", {I.a, I.b}}, {"count", estimate_json(r.count)}});
        rec.summary = Json{{"mean_count", r.count.mean()},
                           {"ratio", r.ratio()},
                           {"ratio_stderr", r.ratio_stderr()},
                           {"sum_nj", r.sum_nj},
                           {"interval_length", r.interval_length}};
    } else if (exp == "minami") {
        Interval I(cfg.get_real("interval.a"), cfg.get_real("interval.b"));
        int m = static_cast<int>(cfg.get_int("m"));
        auto r = run_minami_experiment(model_from_config(cfg), I, m, samples, seed);
        rec.csv_header = {"statistic", "mean", "stderr", "n"};
        auto add = [&](const std::string& name, const MCEstimate& e) {
            rec.csv_rows.push_back(
                {name, format_number(e.mean()), format_number(e.stderr_mean()), std::to_string(e.n)});
            rec.points.push_back(Json{{"statistic", name}, {"estimate", estimate_json(e)}});
        };
        add("factorial_moment", r.factorial_moment);
        add("tail_prob", r.tail_prob);
        add("count", r.count);
        rec.summary = Json{{"m", m},
                           {"factorial_moment", r.factorial_moment.mean()},
                           {"tail_prob", r.tail_prob.mean()}};
    } else if (exp == "locdecay") {
        FractionalMomentConfig fm;
        fm.s = cfg.get_real("s");
        fm.lambda = cfg.get_real("energy");
        auto r = run_localisation_experiment(orbital_from(cfg), fm, samples, seed);
        rec.csv_header = {"distance", "mean", "stderr", "n"};
        for (std::size_t i = 0; i < r.distances.size(); ++i) {
            estimate_row(rec, {r.distances[i]}, r.moments[i]);
            rec.points.push_back(
                Json{{"distance", r.distances[i]}, {"moment", estimate_json(r.moments[i])}});
        }
        rec.summary = Json{{"fit", fit_json(r.fit)}, {"redraw_fraction", r.redraw_fraction()}};
        if (r.redraw_fraction() > 0.01)
            rec.summary["warning"] = "more than 1% of draws were re-drawn near singularity";
    } else if (exp == "dos") {
        auto r = run_dos_histogram(model_from_config(cfg), cfg.get_real("bins.lo"),
                                   cfg.get_real("bins.hi"),
                                   static_cast<int>(cfg.get_int("bins.count")), samples, seed);
        rec.csv_header = {"bin_lo", "bin_hi", "mean", "stderr", "n"};
        for (std::size_t b = 0; b + 1 < r.edges.size(); ++b) {
            estimate_row(rec, {r.edges[b], r.edges[b + 1]}, r.density[b]);
            rec.points.push_back(Json{{"bin", {r.edges[b], r.edges[b + 1]}},
                                      {"density", estimate_json(r.density[b])}});
        }
        rec.summary = Json{{"integral", r.integral()},
                           {"binned_fraction", r.binned_fraction.mean()}};
    } else if (exp == "bandloc") {
        double s = cfg.get_real("s");
        double energy = cfg.get_real("energy");
        int L = static_cast<int>(cfg.get_int("model.L"));
        rec.csv_header = {"W", "distance", "mean", "stderr", "n"};
        Json fits = Json::array();
        auto ws = cfg.get_int_list("wlist");
        for (std::size_t wi = 0; wi < ws.size(); ++wi) {
            BandModelSpec spec{LatticeBox(1, L), ShapeFunction::sharp_cutoff(ws[wi]),
                               symmetry_from(cfg)};
            auto r = run_band_localisation_experiment(spec, energy, s, samples,
                                                      seed + 1000 * wi);
            for (std::size_t i = 0; i < r.distances.size(); ++i) {
                estimate_row(rec, {static_cast<double>(ws[wi]), r.distances[i]}, r.moments[i]);
                rec.points.push_back(Json{{"W", ws[wi]},
                                          {"distance", r.distances[i]},
                                          {"moment", estimate_json(r.moments[i])}});
            }
            fits.push_back(Json{{"W", ws[wi]}, {"fit", fit_json(r.fit)}});
        }
        rec.summary = Json{{"fits", fits}};
    } else if (exp == "repformula") {
        DeformedBlockSpec spec = deformed_from(cfg);
        Interval I(cfg.get_real("interval.a"), cfg.get_real("interval.b"));
        QuadratureSpec quad;
        quad.lambda_nodes = static_cast<int>(cfg.get_int("quad.lambda_nodes"));
        quad.t_nodes = static_cast<int>(cfg.get_int("quad.t_nodes"));
        quad.xi_nodes = static_cast<int>(cfg.get_int("quad.xi_nodes"));
        quad.eta_schedule = cfg.get_list("eta.schedule");
        int instances = static_cast<int>(cfg.get_int("instances"));
        rec.csv_header = {"instance", "eta", "approximation", "exact"};
        double worst = 0;
        for (int i = 0; i < instances; ++i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            BlockHamiltonian H = build_deformed_block(spec, rng);
            int exact = count_in_interval(eig_hermitian(H), I);
            auto approx = representation_count(H, spec.H0, I, quad);
            for (std::size_t e = 0; e < approx.size(); ++e) {
                rec.csv_rows.push_back({std::to_string(i), format_number(quad.eta_schedule[e]),
                                        format_number(approx[e]), std::to_string(exact)});
                rec.points.push_back(Json{{"instance", i},
                                          {"eta", quad.eta_schedule[e]},
                                          {"approximation", approx[e]},
                                          {"exact", exact}});
            }
            worst = std::max(worst, std::abs(approx.back() - exact));
        }
        rec.summary = Json{{"instances", instances}, {"worst_final_error", worst}};
    } else if (exp == "tail") {
        int N = static_cast<int>(cfg.get_int("N"));
        Matrix A = fixed_deformation(N, symmetry_from(cfg), cfg.get("amatrix.kind"),
                                     cfg.get_real("amatrix.scale"), seed ^ 0xa5a5a5a5ull);
        auto r = run_single_block_tail(A, symmetry_from(cfg), cfg.get_list("tgrid"),
                                       cfg.get_real("s"), samples, seed);
        rec.csv_header = {"t", "mean", "stderr", "n"};
        for (std::size_t i = 0; i < r.t_grid.size(); ++i) {
            estimate_row(rec, {r.t_grid[i]}, r.tail[i]);
            rec.points.push_back(Json{{"t", r.t_grid[i]},
                                      {"tail", estimate_json(r.tail[i])},
                                      {"t_times_p", r.t_grid[i] * r.tail[i].mean()}});
        }
        rec.summary = Json{{"fractional_moment", estimate_json(r.fractional_moment)},
                           {"s", r.s},
                           {"shape_reference", std::pow(N, r.s / 2) / (1 - r.s)}};
    } else if (exp == "smallball") {
        int N = static_cast<int>(cfg.get_int("N"));
        Matrix A;
        const std::string kind = cfg.get("amatrix.kind");
        if (kind == "identity")
            A = Matrix::Identity(N, N);
        else if (kind == "rankone")
            A = Matrix(Vector::Unit(N, 0) * Vector::Unit(N, 0).adjoint());
        else
            A = fixed_deformation(N, symmetry_from(cfg), "gaussian", cfg.get_real("amatrix.scale"),
                                  seed ^ 0x5a5a5a5aull);
        auto r = run_small_ball_check(A, symmetry_from(cfg), cfg.get_list("epsgrid"), samples, seed);
        rec.csv_header = {"eps", "mean", "stderr", "n"};
        Json bound_ok = Json::array();
        for (std::size_t i = 0; i < r.eps_grid.size(); ++i) {
            estimate_row(rec, {r.eps_grid[i]}, r.prob[i]);
            rec.points.push_back(
                Json{{"eps", r.eps_grid[i]}, {"prob", estimate_json(r.prob[i])}});
            bound_ok.push_back(r.prob[i].mean() <=
                               5 * r.eps_grid[i] + 3 * r.prob[i].stderr_mean());
        }
        rec.summary = Json{{"bound_satisfied", bound_ok}};
    } else if (exp == "lowerbound") {
        auto r = check_lower_bound(ModelSpec(orbital_from(cfg)), cfg.get_real("tfraction"),
                                   samples, seed);
        rec.csv_header = {"window_a", "window_b", "mean", "stderr", "n"};
        estimate_row(rec, {r.window_a, r.window_b}, r.best_window_count);
        rec.points.push_back(Json{{"window", {r.window_a, r.window_b}},
                                  {"count", estimate_json(r.best_window_count)}});
        rec.summary = Json{{"s2", r.s2},
                           {"t", r.t},
                           {"bound_value", r.bound_value},
                           {"best_mean", r.best_window_count.mean()},
                           {"satisfied", r.best_window_count.mean() +
                                             3 * r.best_window_count.stderr_mean() >=
                                         r.bound_value}};
    } else if (exp == "pertshift") {
        auto r = run_perturbation_shift_check(static_cast<int>(cfg.get_int("N")),
                                              cfg.get_real("a"), cfg.get_list("probes"),
                                              symmetry_from(cfg), samples, seed);
        rec.csv_header = {"probe", "mean", "stderr", "n"};
        for (std::size_t i = 0; i < r.probes.size(); ++i) {
            estimate_row(rec, {r.probes[i]}, r.shift[i]);
            rec.points.push_back(
                Json{{"probe", r.probes[i]}, {"shift", estimate_json(r.shift[i])}});
        }
        rec.summary = Json{{"fitted_coefficient", r.fitted_coefficient},
                           {"fitted_coefficient_stderr", r.fitted_coefficient_stderr},
                           {"predicted_coefficient", r.predicted_coefficient},
                           {"discard_rate", r.discard_rate}};
    } else if (exp == "walkcheck") {
        OrbitalModelSpec spec = orbital_from(cfg);
        double energy = cfg.get_real("energy");
        int instances = static_cast<int>(cfg.get_int("instances"));
        rec.csv_header = {"instance", "max_rel_error"};
        double worst = 0;
        for (int i = 0; i < instances; ++i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            BlockHamiltonian H = build_orbital_hamiltonian(spec, rng);
            double inst_worst = 0;
            const int nb = H.num_blocks();
            for (int x = 0; x < nb; ++x)
                for (int y = 0; y < nb; ++y) {
                    Matrix direct = resolvent_block(H, energy, x, y);
                    Matrix expanded = walk_expansion_resolvent(H, energy, x, y, nb - 1);
                    double rel = (direct - expanded).norm() / (1e-300 + direct.norm());
                    inst_worst = std::max(inst_worst, rel);
                }
            rec.csv_rows.push_back({std::to_string(i), format_number(inst_worst)});
            rec.points.push_back(Json{{"instance", i}, {"max_rel_error", inst_worst}});
            worst = std::max(worst, inst_worst);
        }
        rec.summary = Json{{"worst_rel_error", worst}, {"instances", instances}};
    } else {
        throw std::invalid_argument("unknown experiment: " + exp);
    }
    return rec;
}

int run_selftest() {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    {
        RngStream rng(11, 0);
        RealMatrix m = sample_goe(16, rng);
        check("goe symmetry", (m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
    {
        RngStream rng(11, 1);
        Matrix m = sample_gue(16, rng);
        check("gue hermiticity", (m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
    {
        auto shape = ShapeFunction::sharp_cutoff(7);
        check("sharp cutoff values", shape(0) == 1.0 / 7 && shape(7) == 0.0 && shape(-3) == shape(3));
    }
    {
        auto parts = block_partition_band(3, 1, 1);
        int total = 0;
        bool sizes_ok = true;
        for (auto& p : parts) {
            total += static_cast<int>(p.size());
            sizes_ok = sizes_ok && static_cast<int>(p.size()) >= 2 && static_cast<int>(p.size()) <= 3;
        }
        check("band partition", total == 7 && sizes_ok);
    }
    {
        Spectrum s = eig_hermitian(Matrix(Eigen::Vector3cd(3, 1, 2).asDiagonal()));
        check("eigensolve sort", s.eigenvalues(0) == 1 && s.eigenvalues(2) == 3);
    }
    {
        RngStream rng(11, 2);
        OrbitalModelSpec spec{LatticeBox(1, 1), 2, 0.1, SymmetryClass::orthogonal,
                              OrbitalKind::wegner_orbital};
        BlockHamiltonian H = build_orbital_hamiltonian(spec, rng);
        Matrix direct = resolvent_block(H, 0.1, 0, 2);
        Matrix expanded = walk_expansion_resolvent(H, 0.1, 0, 2, 2);
        check("walk expansion exactness",
              (direct - expanded).norm() <= 1e-8 * direct.norm());
    }
    {
        RngStream rng(11, 3);
        Matrix X = sample_gue(5, rng);
        Matrix B = sample_complex_gaussian_matrix(5, 5, 1.0, rng);
        Matrix Y = -(B * B.adjoint());
        auto [lhs, rhs] = poisson_identity_check(X, Y, 0.5);
        check("poisson identity", std::abs(lhs - rhs) < 1e-6);
    }
    {
        auto one = ave_quadrature([](double, double, double) { return 1.0; }, Interval(-1, 1),
                                  0.1, QuadratureSpec{51, 51, 51, {0.1}});
        check("ave normalization", std::abs(one - 1.0) < 1e-10);
    }
    {
        RngStream rng(11, 4);
        DeformedBlockSpec spec{{6}, Matrix::Zero(6, 6), SymmetryClass::orthogonal};
        BlockHamiltonian H = build_deformed_block(spec, rng);
        Spectrum before = eig_hermitian(H);
        Vector v = Vector::Unit(6, 0);
        Spectrum after = eig_hermitian(rank_one_perturb(H, 0, v, 1.0));
        check("interlacing", check_interlacing(before, after));
    }
    return failures;
}

}  // namespace orbital
