#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "invsq/cli.hpp"
#include "invsq/errors.hpp"
#include "invsq/flow.hpp"
#include "invsq/oracle.hpp"
#include "invsq/spectrum.hpp"
#include "invsq/wavefunction.hpp"

namespace invsq::cli {

namespace {

const std::string kLength = "length";
const std::string kInvLength = "1/length";
const std::string kEnergy = "1/length^2";

Extension extension_of(const RunConfig& config) {
    if (!config.c) {
        throw UsageError("--c is required");
    }
    return Extension(*config.c, config.r0);
}

std::vector<Cutoff> cutoffs_of(const RunConfig& config, bool required) {
    std::vector<double> values = resolve_cutoffs(config);
    if (values.empty() && required) {
        throw UsageError("give the cutoff with --R or --R-log");
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<Cutoff> out;
    out.reserve(values.size());
    for (double R : values) {
        out.emplace_back(R, config.r0);
    }
    return out;
}

std::vector<Scheme> schemes_of(const RunConfig& config) {
    if (config.schemes.empty()) {
        return {Scheme::SquareWell};
    }
    return config.schemes;
}

Cell opt_cell(const std::optional<double>& v) {
    return v ? Cell{*v} : Cell{};
}

double rel_dev(double a, double b) {
    return std::abs(a - b) / std::abs(b);
}

std::string roots_text(const std::vector<double>& roots) {
    std::string s;
    for (double r : roots) {
        s += (s.empty() ? "" : " ") + format_number(r);
    }
    return s;
}

} // namespace

std::optional<double> fitted_order(const std::vector<double>& R, const std::vector<double>& dev) {
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < R.size() && i < dev.size(); ++i) {
        if (R[i] > 0.0 && dev[i] > 0.0 && std::isfinite(dev[i])) {
            const double x = std::log(R[i]);
            const double y = std::log(dev[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    if (n < 2) {
        return std::nullopt;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) {
        return std::nullopt;
    }
    return (n * sxy - sx * sy) / den;
}

CommandResult cmd_flow(const RunConfig& config) {
    const Coupling coupling = coupling_of(config);
    const Extension ext = extension_of(config);
    const std::vector<Cutoff> grid = cutoffs_of(config, true);

    CommandResult result;
    result.table.command = "flow";
    result.table.columns = {{"scheme", ""},        {"R", kLength},      {"R_over_r0", ""},
                            {"lambda", ""},        {"branch_index", ""}, {"pole", ""},
                            {"critical_ratio", ""}};
    std::size_t failed = 0;
    std::size_t total = 0;
    for (Scheme scheme : schemes_of(config)) {
        for (const FlowOutcome& o : flow_trajectory(scheme, coupling, ext, grid)) {
            ++total;
            std::vector<Cell> row{std::string(to_string(scheme))};
            if (const auto* p = std::get_if<FlowPoint>(&o)) {
                row.insert(row.end(), {p->cutoff.R(), p->cutoff.ratio(), p->lambda});
                row.push_back(p->branch_index ? Cell{static_cast<long long>(*p->branch_index)}
                                              : Cell{});
                row.push_back(false);
                row.push_back(opt_cell(flow_pole_ratio(coupling, ext)));
            } else {
                const auto& pole = std::get<FlowPole>(o);
                ++failed;
                row.insert(row.end(), {pole.cutoff.R(), pole.cutoff.ratio(), Cell{}, Cell{}, true,
                                       pole.critical_ratio});
                result.diagnostics.push_back(pole.message);
            }
            result.table.rows.push_back(std::move(row));
        }
    }
    if (total > 0 && failed == total) {
        result.exit_code = kExitNumerical;
    }
    return result;
}

CommandResult cmd_bind(const RunConfig& config) {
    const Coupling coupling = coupling_of(config);
    const Extension ext = extension_of(config);
    const std::string& method = config.method;
    const bool want_closed = method == "closed-form" || method == "all";
    const bool want_exact = method == "exact" || method == "all";
    const bool want_oracle = method == "oracle" || method == "all";
    if (!want_closed && !want_exact && !want_oracle) {
        throw UsageError("--method must be one of exact, closed-form, oracle, all");
    }
    const std::vector<Cutoff> grid = cutoffs_of(config, want_exact || want_oracle);

    CommandResult result;
    Table& t = result.table;
    t.command = "bind";
    t.columns = {{"method", ""},          {"scheme", ""},          {"R", kLength},
                 {"R_over_r0", ""},       {"status", ""},          {"k", kInvLength},
                 {"E", kEnergy},          {"rel_dev_closed", ""},  {"rel_dev_exact", ""},
                 {"note", ""}};

    std::optional<double> k_closed;
    if (const auto o = closed_form_k(coupling, ext); has_bound_state(o)) {
        k_closed = std::get<BoundState>(o).k;
    }
    auto emit = [&](Method m, std::optional<Scheme> scheme, std::optional<Cutoff> cutoff,
                    const BindOutcome& o, std::optional<double> k_exact) {
        std::vector<Cell> row{std::string(to_string(m))};
        row.push_back(scheme ? Cell{std::string(to_string(*scheme))} : Cell{});
        row.push_back(cutoff ? Cell{cutoff->R()} : Cell{});
        row.push_back(cutoff ? Cell{cutoff->ratio()} : Cell{});
        if (const auto* b = std::get_if<BoundState>(&o)) {
            row.insert(row.end(), {std::string("bound"), b->k, b->E});
            row.push_back(want_closed && k_closed && m != Method::ClosedForm
                              ? Cell{rel_dev(b->k, *k_closed)}
                              : Cell{});
            row.push_back(k_exact && m == Method::OdeOracle ? Cell{rel_dev(b->k, *k_exact)}
                                                            : Cell{});
            std::string note;
            for (const auto& w : b->warnings) {
                note += (note.empty() ? "" : "; ") + w;
            }
            row.push_back(note);
        } else {
            row.insert(row.end(), {std::string("no-bound-state"), Cell{}, Cell{}, Cell{}, Cell{},
                                   std::get<NoBoundState>(o).reason});
        }
        t.rows.push_back(std::move(row));
    };

    if (want_closed) {
        emit(Method::ClosedForm, std::nullopt, std::nullopt, closed_form_k(coupling, ext),
             std::nullopt);
    }
    for (Scheme scheme : schemes_of(config)) {
        for (const Cutoff& cutoff : grid) {
            std::optional<double> k_exact;
            if (want_exact) {
                try {
                    const BindOutcome o = solve_bound_state_exact(scheme, coupling, ext, cutoff);
                    if (has_bound_state(o)) {
                        k_exact = std::get<BoundState>(o).k;
                    }
                    emit(Method::ExactMatching, scheme, cutoff, o, std::nullopt);
                } catch (const MultiplicityError& e) {
                    result.diagnostics.push_back(std::string(e.what()) +
                                                 "; roots k = " + roots_text(e.roots()));
                    result.exit_code = kExitMultiplicity;
                    return result;
                }
            }
            if (want_oracle) {
                // Shallow-state window kR <= 0.1, down to k = 1e-8 / r0.
                const double k_lo = 1e-8 / config.r0;
                const double k_hi = 0.1 / cutoff.R();
                if (!(k_hi > k_lo)) {
                    throw UsageError("bind: cutoff too large for the oracle window kR <= 0.1");
                }
                ShootOptions opt;
                opt.n_steps = config.n_steps;
                try {
                    const BindOutcome o = shoot_bound_state(scheme, coupling, ext, cutoff,
                                                            {-(k_hi * k_hi), -(k_lo * k_lo)}, opt);
                    emit(Method::OdeOracle, scheme, cutoff, o, k_exact);
                } catch (const MultiplicityError& e) {
                    result.diagnostics.push_back(std::string(e.what()) +
                                                 "; roots k = " + roots_text(e.roots()));
                    result.exit_code = kExitMultiplicity;
                    return result;
                }
            }
        }
    }
    return result;
}

CommandResult cmd_compare(const RunConfig& config) {
    const Coupling coupling = coupling_of(config);
    const Extension ext = extension_of(config);
    const std::vector<Cutoff> grid = cutoffs_of(config, true);
    if (grid.size() < 2) {
        throw UsageError("compare needs at least two distinct cutoffs");
    }

    CommandResult result;
    Table& t = result.table;
    t.command = "compare";
    t.columns = {{"row", ""},
                 {"R", kLength},
                 {"R_over_r0", ""},
                 {"k_SW", kInvLength},
                 {"k_DS", kInvLength},
                 {"k_closed", kInvLength},
                 {"dev_SW_DS", ""},
                 {"dev_SW_closed", ""},
                 {"dev_DS_closed", ""},
                 {"order_SW_closed", ""},
                 {"order_DS_closed", ""},
                 {"error", ""}};

    std::optional<double> k_closed;
    if (const auto o = closed_form_k(coupling, ext); has_bound_state(o)) {
        k_closed = std::get<BoundState>(o).k;
    }
    std::vector<double> Rs;
    std::vector<double> dev_sw;
    std::vector<double> dev_ds;
    // Rows from the smallest deviation scale upward: largest R first.
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        const Cutoff& cutoff = *it;
        std::optional<double> k[2];
        std::string error;
        const Scheme schemes[2] = {Scheme::SquareWell, Scheme::DeltaShell};
        for (int s = 0; s < 2; ++s) {
            try {
                const BindOutcome o = solve_bound_state_exact(schemes[s], coupling, ext, cutoff);
                if (has_bound_state(o)) {
                    k[s] = std::get<BoundState>(o).k;
                } else {
                    error += (error.empty() ? "" : "; ") + std::string(to_string(schemes[s])) +
                             ": no bound state";
                }
            } catch (const MultiplicityError& e) {
                error += (error.empty() ? "" : "; ") + std::string(to_string(schemes[s])) + ": " +
                         e.what() + " (k = " + roots_text(e.roots()) + ")";
                result.exit_code = kExitMultiplicity;
            } catch (const std::exception& e) {
                error += (error.empty() ? "" : "; ") + std::string(to_string(schemes[s])) + ": " +
                         e.what();
            }
        }
        std::vector<Cell> row{std::string("data"), cutoff.R(), cutoff.ratio(), opt_cell(k[0]),
                              opt_cell(k[1]), opt_cell(k_closed)};
        std::optional<double> d_sd;
        std::optional<double> d_sc;
        std::optional<double> d_dc;
        const double scale = k_closed.value_or(0.0);
        if (k[0] && k[1] && k_closed) {
            d_sd = std::abs(*k[0] - *k[1]) / scale;
        }
        if (k[0] && k_closed) {
            d_sc = rel_dev(*k[0], scale);
        }
        if (k[1] && k_closed) {
            d_dc = rel_dev(*k[1], scale);
        }
        row.insert(row.end(), {opt_cell(d_sd), opt_cell(d_sc), opt_cell(d_dc), Cell{}, Cell{},
                               error});
        t.rows.push_back(std::move(row));
        Rs.push_back(cutoff.R());
        dev_sw.push_back(d_sc.value_or(0.0));
        dev_ds.push_back(d_dc.value_or(0.0));
    }
    const auto order_sw = fitted_order(Rs, dev_sw);
    const auto order_ds = fitted_order(Rs, dev_ds);
    t.rows.push_back({std::string("summary"), Cell{}, Cell{}, Cell{}, Cell{}, opt_cell(k_closed),
                      Cell{}, Cell{}, Cell{}, opt_cell(order_sw), opt_cell(order_ds),
                      std::string()});
    t.fields.emplace_back("order_SW_closed", opt_cell(order_sw));
    t.fields.emplace_back("order_DS_closed", opt_cell(order_ds));
    return result;
}

CommandResult cmd_wave(const RunConfig& config) {
    const Coupling coupling = coupling_of(config);
    const Extension ext = extension_of(config);
    const std::vector<Cutoff> grid = cutoffs_of(config, true);
    const std::vector<Scheme> schemes = schemes_of(config);
    if (grid.size() != 1 || schemes.size() != 1) {
        throw UsageError("wave needs exactly one scheme and one cutoff");
    }
    if (config.kind != "bound" && config.kind != "zero") {
        throw UsageError("--kind must be bound or zero");
    }
    if (config.spacing != "log" && config.spacing != "linear") {
        throw UsageError("--spacing must be log or linear");
    }
    const Cutoff& cutoff = grid.front();
    const Scheme scheme = schemes.front();

    CommandResult result;
    Table& t = result.table;
    t.command = "wave";
    const bool bound = config.kind == "bound";
    t.columns = {{"r", kLength},
                 {"u", bound ? "length^-1/2 normalized" : "exterior coefficient 1"}};

    std::optional<PiecewiseWave> wave;
    double default_max = 10.0 * config.r0;
    if (bound) {
        const BindOutcome o = solve_bound_state_exact(scheme, coupling, ext, cutoff);
        if (!has_bound_state(o)) {
            const std::string reason = std::get<NoBoundState>(o).reason;
            t.fields.emplace_back("status", std::string("no-bound-state"));
            t.fields.emplace_back("reason", reason);
            result.diagnostics.push_back("no bound state: " + reason);
            return result;
        }
        const double k = std::get<BoundState>(o).k;
        wave = normalize(PiecewiseWave::bound_state(scheme, coupling, ext, cutoff, k));
        default_max = 25.0 / k;
        t.fields.emplace_back("status", std::string("bound"));
        t.fields.emplace_back("k", k);
    } else {
        wave = PiecewiseWave::zero_energy(scheme, coupling, ext, cutoff);
        t.fields.emplace_back("status", std::string("zero-energy"));
    }
    const double r_min = config.r_min.value_or(0.1 * cutoff.R());
    const double r_max = config.r_max.value_or(default_max);
    if (!(r_min > 0.0 && r_max > r_min)) {
        throw UsageError("wave needs 0 < r-min < r-max");
    }
    const int n = config.samples;
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        double r = config.spacing == "log" ? r_min * std::pow(r_max / r_min, f)
                                           : r_min + (r_max - r_min) * f;
        if (i == n - 1) {
            r = r_max;
        }
        t.rows.push_back({r, eval_wave(*wave, r)});
    }
    return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Renormalized inverse-square potential toolkit", "invsq"};
    app.require_subcommand(1);
    RunConfig config;
    std::string config_path;
    std::vector<std::string> scheme_names;
    std::vector<double> R_log;
    std::string format = "csv";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scheme", scheme_names, "square-well and/or delta-shell")
            ->delimiter(',');
        auto* g = sub->add_option("--g", config.g, "long-range strength g in [-0.25, 0.75]");
        auto* nu = sub->add_option("--nu", config.nu, "index nu in [0, 1]");
        g->excludes(nu);
        sub->add_option("--c", config.c, "self-adjoint extension constant c");
        sub->add_option("--r0", config.r0, "extension length scale r0");
        auto* R = sub->add_option("--R", config.R_values, "cutoff radius (repeatable)")
                      ->delimiter(',');
        auto* Rl = sub->add_option("--R-log", R_log, "log-spaced cutoffs: min max n")
                       ->expected(3);
        R->excludes(Rl);
        sub->add_option("--method", config.method, "exact, closed-form, oracle or all");
        sub->add_option("--out", config.out, "output path (default stdout)");
        sub->add_option("--format", format, "csv or json");
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_flag("--meta", config.meta, "emit run metadata");
        sub->add_option("--n-steps", config.n_steps, "oracle grid steps");
        sub->add_option("--kind", config.kind, "wave: bound or zero");
        sub->add_option("--r-min", config.r_min, "wave: first sample radius");
        sub->add_option("--r-max", config.r_max, "wave: last sample radius");
        sub->add_option("--samples", config.samples, "wave: number of samples");
        sub->add_option("--spacing", config.spacing, "wave: log or linear");
    };
    const std::pair<const char*, const char*> subcommands[] = {
        {"flow", "counterterm strength lambda(R)"},
        {"bind", "bound-state momentum and energy"},
        {"compare", "cutoff convergence table against the closed form"},
        {"wave", "sampled wavefunction"},
    };
    for (const auto& [name, help] : subcommands) {
        add_common(app.add_subcommand(name, help));
    }

    // Config-file entries go in front of the command-line flags they do not
    // override.
    std::vector<std::string> argv_list = args;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
        if (!path.empty()) {
            try {
                const auto extra = config_to_args(read_config_file(path), args);
                if (!args.empty()) {
                    argv_list.insert(argv_list.begin() + 1, extra.begin(), extra.end());
                }
            } catch (const UsageError& e) {
                err << "error: " << e.what() << '\n';
                return kExitUsage;
            }
            break;
        }
    }

    try {
        std::vector<std::string> reversed(argv_list.rbegin(), argv_list.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    CommandResult result;
    try {
        config.command = app.get_subcommands().front()->get_name();
        for (const std::string& s : scheme_names) {
            config.schemes.push_back(parse_scheme(s));
        }
        if (!R_log.empty()) {
            const double n = R_log[2];
            if (n != std::floor(n)) {
                throw UsageError("--R-log point count must be an integer");
            }
            config.R_log = LogRange{R_log[0], R_log[1], static_cast<int>(n)};
        }
        if (format == "csv") {
            config.format = Format::Csv;
        } else if (format == "json") {
            config.format = Format::Json;
        } else {
            throw UsageError("--format must be csv or json");
        }
        validate(config);
        if (config.command == "flow") {
            result = cmd_flow(config);
        } else if (config.command == "bind") {
            result = cmd_bind(config);
        } else if (config.command == "compare") {
            result = cmd_compare(config);
        } else {
            result = cmd_wave(config);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MultiplicityError& e) {
        err << "error: " << e.what() << "; roots k = " << roots_text(e.roots()) << '\n';
        return kExitMultiplicity;
    } catch (const FlowPoleError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalError& e) {
        err << "error: " << e.what();
        if (!e.detail().empty()) {
            err << " (" << e.detail() << ")";
        }
        err << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }

    for (const std::string& d : result.diagnostics) {
        err << d << '\n';
    }
    std::vector<std::string> meta;
    if (config.meta) {
        std::string line = "invsq " + config.command;
        for (const std::string& a : args) {
            line += ' ' + a;
        }
        meta.push_back(line);
    }
    std::ofstream file;
    std::ostream* sink = &out;
    if (config.out) {
        file.open(*config.out);
        if (!file) {
            err << "error: cannot write '" << *config.out << "'\n";
            return kExitUsage;
        }
        sink = &file;
    }
    if (config.format == Format::Json) {
        write_json(*sink, result.table, meta);
    } else {
        write_csv(*sink, result.table, meta);
    }
    return result.exit_code;
}

} // namespace invsq::cli
