#include <atprank/cli.hpp>
#include <atprank/analysis.hpp>
#include <atprank/error.hpp>
#include <atprank/hash.hpp>
#include <atprank/ingest.hpp>
#include <atprank/model.hpp>
#include <atprank/points.hpp>
#include <atprank/season.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

namespace fs = std::filesystem;

namespace atprank {

namespace {

std::string now_utc() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    body(out);
    out.flush();
    if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", dir.string(), ec.message()));
}

/// One manifest per output directory: what ran, with which resolved flags,
/// over which inputs (by content hash).
class Manifest {
public:
    explicit Manifest(std::string command) : command_(std::move(command)), started_(now_utc()) {}

    void flag(const std::string& name, const std::string& value) { flags_[name] = value; }
    void input(const fs::path& path) { inputs_[path.string()] = sha256_file(path); }
    void inputs(const std::vector<fs::path>& paths) {
        for (const auto& p : paths) input(p);
    }
    void seed(std::uint64_t s) { seed_ = s; }

    void write(const fs::path& dir) const {
        write_file(dir / "manifest.txt", [&](std::ostream& out) {
            out << "command = " << command_ << '\n';
            out << "tool_version = " << kVersion << '\n';
            if (seed_) out << "rng_seed = " << *seed_ << '\n';
            for (const auto& [k, v] : flags_) out << "flag." << k << " = " << v << '\n';
            for (const auto& [k, v] : inputs_) out << "input." << k << " = sha256:" << v << '\n';
            out << "started_at = " << started_ << '\n';
            out << "finished_at = " << now_utc() << '\n';
        });
    }

private:
    std::string command_;
    std::string started_;
    std::map<std::string, std::string> flags_;
    std::map<std::string, std::string> inputs_;
    std::optional<std::uint64_t> seed_;
};

std::string join_paths(const std::vector<fs::path>& paths) {
    std::string s;
    for (const auto& p : paths) {
        if (!s.empty()) s += ';';
        s += p.string();
    }
    return s;
}

struct MatchInputs {
    std::vector<fs::path> files;
    std::string from;
    std::string to;
    std::string levels = "G,M,A,F,D,O";
    bool include_qualifying = false;
    bool drop_walkovers = false;
    std::string schema;

    void add_to(CLI::App& cmd) {
        cmd.add_option("matches", files, "Match archive files (CSV with header)")->required()->check(CLI::ExistingFile);
        cmd.add_option("--from", from, "First date, yyyymmdd or yyyy-mm-dd (inclusive)");
        cmd.add_option("--to", to, "Last date (inclusive)");
        cmd.add_option("--levels", levels, "Comma-separated archive level codes to keep")->capture_default_str();
        cmd.add_flag("--include-qualifying", include_qualifying, "Keep qualifying-round matches");
        cmd.add_flag("--drop-walkovers", drop_walkovers, "Drop rows whose score marks a walkover");
        cmd.add_option("--schema", schema, "key=value file mapping logical fields to column names")
            ->check(CLI::ExistingFile);
    }

    IngestOptions options() const {
        IngestOptions o;
        if (!from.empty()) o.range.from = parse_date_or_throw(from);
        if (!to.empty()) o.range.to = parse_date_or_throw(to);
        o.levels.clear();
        std::stringstream ss(levels);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) o.levels.insert(item);
        }
        o.include_qualifying = include_qualifying;
        o.drop_walkovers = drop_walkovers;
        if (!schema.empty()) o.schema = MatchSchema::from_key_values(read_key_values(schema));
        return o;
    }

    void record(Manifest& m) const {
        m.flag("from", from);
        m.flag("to", to);
        m.flag("levels", levels);
        m.flag("include_qualifying", include_qualifying ? "true" : "false");
        m.flag("drop_walkovers", drop_walkovers ? "true" : "false");
        m.flag("schema", schema);
        m.flag("matches", join_paths(files));
        m.inputs(files);
        if (!schema.empty()) m.input(schema);
    }
};

struct AlphaSource {
    std::optional<double> alpha;
    std::string params;

    void add_to(CLI::App& cmd, bool required) {
        auto* a = cmd.add_option("--alpha", alpha, "Model exponent");
        auto* p = cmd.add_option("--params", params, "Fitted parameters file")->check(CLI::ExistingFile);
        a->excludes(p);
        if (required) {
            cmd.callback([a, p] {
                if (a->count() == 0 && p->count() == 0) throw CLI::ValidationError("one of --alpha or --params is required");
            });
        }
    }

    std::optional<double> resolve() const {
        if (alpha) {
            if (!(*alpha > 0.0)) throw UsageError(fmt::format("--alpha must be positive, got {}", *alpha));
            return alpha;
        }
        if (!params.empty()) {
            std::ifstream in(params);
            if (!in) throw IoError(fmt::format("cannot read '{}'", params));
            return read_params(in).params.alpha;
        }
        return std::nullopt;
    }

    void record(Manifest& m) const {
        if (alpha) m.flag("alpha", fmt::format("{:.17g}", *alpha));
        if (!params.empty()) {
            m.flag("params", params);
            m.input(params);
        }
    }
};

std::pair<std::optional<Date>, std::optional<Date>> date_span(std::span<const MatchObservation> matches) {
    if (matches.empty()) return {};
    Date lo = matches.front().date(), hi = lo;
    for (const auto& m : matches) {
        lo = std::min(lo, m.date());
        hi = std::max(hi, m.date());
    }
    return {lo, hi};
}

void print_ingest(std::ostream& err, const IngestReport& r) {
    err << fmt::format("ingested {} rows: kept {}, zero points {}, missing {}, out of range {}\n", r.total_rows, r.kept,
                       r.dropped_zero_points, r.dropped_missing, r.dropped_out_of_range);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Logistic ratio model over ATP ranking points: fit, evaluate, report and simulate", "atprank"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit alpha by minimising the Brier score");
    MatchInputs fit_in;
    fit_in.add_to(*fit);
    FitOptions fit_opts;
    std::size_t grid_points = 2000;
    std::string fit_out;
    fit->add_option("--lo", fit_opts.search_lo, "Lower end of the alpha bracket")->capture_default_str();
    fit->add_option("--hi", fit_opts.search_hi, "Upper end of the alpha bracket")->capture_default_str();
    fit->add_option("--tol", fit_opts.tol, "Bracket-width tolerance")->capture_default_str();
    fit->add_option("--grid-points", grid_points, "Grid-scan cross-check resolution")->capture_default_str();
    fit->add_option("--out", fit_out, "Output directory")->required();

    // predict
    auto* pred = app.add_subcommand("predict", "Win probability of player i over player j");
    AlphaSource pred_alpha;
    pred_alpha.add_to(*pred, true);
    double r_i = 0.0, r_j = 0.0;
    pred->add_option("r_i", r_i, "Ranking points of player i")->required();
    pred->add_option("r_j", r_j, "Ranking points of player j")->required();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Brier score of a given alpha on a (held-out) range");
    MatchInputs eval_in;
    eval_in.add_to(*eval);
    AlphaSource eval_alpha;
    eval_alpha.add_to(*eval, true);
    std::string eval_out;
    eval->add_option("--out", eval_out, "Optional output directory");

    // report
    auto* report = app.add_subcommand("report", "Emit calibration figures and ranking tables");
    MatchInputs rep_in;
    rep_in.add_to(*report);
    AlphaSource rep_alpha;
    rep_alpha.add_to(*report, false);
    std::vector<fs::path> ranking_files;
    std::string snapshot_text, categories_file, rep_out;
    int ratio_bins = 40, prob_bins = 20;
    report->add_option("--rankings", ranking_files, "Ranking snapshot files")->check(CLI::ExistingFile);
    report->add_option("--snapshot", snapshot_text, "Ranking date for the participation table (default: latest)");
    report->add_option("--categories", categories_file, "500-series name list (name,from_year,to_year)")
        ->check(CLI::ExistingFile);
    report->add_option("--ratio-bins", ratio_bins, "Log-spaced ratio bins over [0.01, 100]")->capture_default_str();
    report->add_option("--prob-bins", prob_bins, "Linear probability bins over [0, 1]")->capture_default_str();
    report->add_option("--out", rep_out, "Output directory")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo seasons under the logistic model");
    std::string sim_config, sim_out;
    std::map<std::string, std::string> overrides;
    sim->add_option("--config", sim_config, "Season config (key=value)")->check(CLI::ExistingFile);
    const std::vector<std::pair<std::string, std::string>> sim_keys = {
        {"alpha", "Model exponent (0 = fair coin)"},
        {"rng_seed", "RNG seed"},
        {"n_players", "Player pool size"},
        {"n_seasons", "Independent replicate seasons"},
        {"warmup_seasons", "Unrecorded years before each recorded one"},
        {"top30_mandatory", "Top 30 play every Grand Slam and Masters (true/false)"},
        {"n_500_choices", "500 events each top-30 player picks"},
        {"n_250_choices", "250 events each top-30 player picks"},
        {"point_floor", "Points assumed for players with none"},
        {"threads", "Worker threads"},
        {"calendar", "Calendar CSV (category,draw_size,week) or 'default'"}};
    for (const auto& [key, help] : sim_keys) {
        sim->add_option_function<std::string>("--" + key, [&overrides, k = key](const std::string& v) { overrides[k] = v; },
                                              help);
    }
    sim->add_option_function<std::string>("--seed", [&overrides](const std::string& v) { overrides["rng_seed"] = v; },
                                          "Alias of --rng_seed");
    sim->add_option("--out", sim_out, "Output directory")->required();

    // ingest-dump
    auto* dump = app.add_subcommand("ingest-dump", "Write normalised observations after filtering");
    MatchInputs dump_in;
    dump_in.add_to(*dump);
    std::string dump_out;
    dump->add_option("--out", dump_out, "Output directory")->required();

    // points-table
    auto* table_cmd = app.add_subcommand("points-table", "Export the built-in point table");
    std::string table_out;
    table_cmd->add_option("--out", table_out, "Output file (default: standard output)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        for (auto* sub : app.get_subcommands()) out << sub->help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*fit) {
            Manifest manifest("fit");
            fit_in.record(manifest);
            manifest.flag("lo", fmt::format("{:.17g}", fit_opts.search_lo));
            manifest.flag("hi", fmt::format("{:.17g}", fit_opts.search_hi));
            manifest.flag("tol", fmt::format("{:.17g}", fit_opts.tol));
            manifest.flag("grid_points", std::to_string(grid_points));

            const auto ingest = load_matches(fit_in.files, fit_in.options());
            print_ingest(err, ingest.report);
            if (ingest.matches.empty()) throw DomainError("no matches");
            const auto params = fit_alpha(ingest.matches, fit_opts);
            const auto grid = grid_scan_alpha(ingest.matches, fit_opts.search_lo, fit_opts.search_hi, grid_points);
            const double grid_step = (fit_opts.search_hi - fit_opts.search_lo) / static_cast<double>(grid_points - 1);
            const double baseline = baseline_brier(ingest.matches);

            ParamsDocument doc{params, dataset_fingerprint(ingest.matches), {}, {}};
            std::tie(doc.first_date, doc.last_date) = date_span(ingest.matches);

            ensure_dir(fit_out);
            write_file(fs::path(fit_out) / "params.txt", [&](std::ostream& o) { write_params(o, doc); });
            auto report_body = [&](std::ostream& o) {
                o << fmt::format("alpha {:.6f}\n", params.alpha);
                o << fmt::format("e2 {:.6f}\n", *params.fitted_e2);
                o << fmt::format("baseline_e2 {:.6f}\n", baseline);
                o << fmt::format("n_matches {}\n", *params.n_matches);
                o << fmt::format("grid_alpha {:.6f}\n", grid.alpha);
                o << fmt::format("grid_step {:.6f}\n", grid_step);
                o << fmt::format("grid_agrees {}\n", std::abs(grid.alpha - params.alpha) <= grid_step ? "yes" : "NO");
                if (doc.first_date) o << "first_date " << format_date(*doc.first_date) << '\n';
                if (doc.last_date) o << "last_date " << format_date(*doc.last_date) << '\n';
                o << fmt::format("rows {} kept {} dropped_zero_points {} dropped_missing {} dropped_out_of_range {}\n",
                                 ingest.report.total_rows, ingest.report.kept, ingest.report.dropped_zero_points,
                                 ingest.report.dropped_missing, ingest.report.dropped_out_of_range);
            };
            write_file(fs::path(fit_out) / "fit_report.txt", report_body);
            manifest.write(fit_out);
            report_body(out);
            return kExitOk;
        }

        if (*pred) {
            const double alpha = *pred_alpha.resolve();
            if (!(r_i > 0.0) || !(r_j > 0.0)) {
                throw UsageError(fmt::format("ranking points must be positive (got {} and {})", r_i, r_j));
            }
            const auto p = predict(alpha, r_i, r_j);
            out << fmt::format("ratio {:.6f}\nprobability {:.6f}\n", p.ratio, p.probability);
            return kExitOk;
        }

        if (*eval) {
            const double alpha = *eval_alpha.resolve();
            const auto ingest = load_matches(eval_in.files, eval_in.options());
            print_ingest(err, ingest.report);
            if (ingest.matches.empty()) throw DomainError("no matches");
            auto body = [&](std::ostream& o) {
                o << fmt::format("alpha {:.6f}\n", alpha);
                o << fmt::format("e2 {:.6f}\n", brier_score(alpha, ingest.matches));
                o << fmt::format("baseline_e2 {:.6f}\n", baseline_brier(ingest.matches));
                o << fmt::format("n_matches {}\n", ingest.matches.size());
            };
            if (!eval_out.empty()) {
                Manifest manifest("evaluate");
                eval_in.record(manifest);
                eval_alpha.record(manifest);
                ensure_dir(eval_out);
                write_file(fs::path(eval_out) / "evaluation.txt", body);
                manifest.write(eval_out);
            }
            body(out);
            return kExitOk;
        }

        if (*report) {
            Manifest manifest("report");
            rep_in.record(manifest);
            rep_alpha.record(manifest);
            manifest.flag("ratio_bins", std::to_string(ratio_bins));
            manifest.flag("prob_bins", std::to_string(prob_bins));
            manifest.flag("rankings", join_paths(ranking_files));
            manifest.flag("snapshot", snapshot_text);
            manifest.flag("categories", categories_file);
            manifest.inputs(ranking_files);
            if (!categories_file.empty()) manifest.input(categories_file);

            const IngestOptions options = rep_in.options();
            const auto raw = load_raw_matches(rep_in.files, options.schema);
            const auto ingest = filter_matches(raw, options);
            print_ingest(err, ingest.report);
            if (ingest.matches.empty()) throw DomainError("no matches");
            double alpha = 0.0;
            if (auto a = rep_alpha.resolve()) {
                alpha = *a;
            } else {
                alpha = fit_alpha(ingest.matches).alpha;
                err << fmt::format("no --alpha/--params given; fitted alpha {:.6f}\n", alpha);
            }
            const fs::path dir(rep_out);
            ensure_dir(dir);

            const auto ratio = bin_by_ratio(ingest.matches, alpha, ratio_bins);
            const auto calib = calibration_curve(ingest.matches, alpha, prob_bins);
            write_file(dir / "ratio_curve.csv", [&](std::ostream& o) { write_curve_csv(o, ratio); });
            write_file(dir / "ratio_curve.svg", [&](std::ostream& o) {
                write_curve_svg(o, ratio, "Ranking point ratio to winning probability", "points ratio", true);
            });
            write_file(dir / "calibration_curve.csv", [&](std::ostream& o) { write_curve_csv(o, calib); });
            write_file(dir / "calibration_curve.svg", [&](std::ostream& o) {
                write_curve_svg(o, calib, "Predicted winning probability to result", "predicted probability", false);
            });
            write_file(dir / "model.txt", [&](std::ostream& o) {
                o << fmt::format("alpha {:.6f}\ne2 {:.6f}\nbaseline_e2 {:.6f}\nn_matches {}\n", alpha,
                                 brier_score(alpha, ingest.matches), baseline_brier(ingest.matches),
                                 ingest.matches.size());
            });

            if (ranking_files.empty()) {
                err << "notice: no ranking files given; rank statistics and participation tables skipped\n";
            } else {
                const auto rankings = load_rankings(ranking_files);
                const auto stats = rank_stats(rankings.entries);
                write_file(dir / "rank_stats.txt", [&](std::ostream& o) { write_rank_stats_text(o, stats); });
                write_file(dir / "rank_stats.csv", [&](std::ostream& o) { write_rank_stats_csv(o, stats); });

                Date snapshot{};
                if (!snapshot_text.empty()) {
                    snapshot = parse_date_or_throw(snapshot_text);
                } else {
                    if (rankings.entries.empty()) throw DomainError("ranking files contain no entries");
                    snapshot = rankings.entries.front().date;
                    for (const auto& e : rankings.entries) snapshot = std::max(snapshot, e.date);
                }
                std::vector<RankingEntry> snap;
                for (const auto& e : rankings.entries) {
                    if (e.date == snapshot) snap.push_back(e);
                }
                if (snap.empty()) {
                    err << "notice: no ranking snapshot on " << format_date(snapshot)
                        << "; participation table skipped\n";
                } else {
                    const CategoryResolver resolver =
                        categories_file.empty() ? CategoryResolver() : CategoryResolver::from_file(categories_file);
                    const auto table = participation_table(raw, snap, snapshot, std::array{8, 16, 30, 64}, resolver);
                    write_file(dir / "participation.txt", [&](std::ostream& o) {
                        o << "snapshot " << format_date(snapshot) << '\n';
                        write_participation_text(o, table);
                    });
                    write_file(dir / "participation.csv", [&](std::ostream& o) { write_participation_csv(o, table); });
                }
            }
            manifest.write(dir);
            out << "report written to " << dir.string() << '\n';
            return kExitOk;
        }

        if (*sim) {
            Manifest manifest("simulate");
            KeyValues kv;
            if (!sim_config.empty()) {
                kv = read_key_values(sim_config);
                manifest.input(sim_config);
                manifest.flag("config", sim_config);
            }
            for (const auto& [k, v] : overrides) kv[k] = v;
            const SeasonConfig config = parse_season_config(kv);
            config.validate();
            for (const auto& [k, v] : season_config_to_kv(config)) manifest.flag(k, v);
            if (config.calendar_source != "default") manifest.input(config.calendar_source);
            manifest.seed(config.rng_seed);

            const auto runs = run_seasons(config, fresh_pool(config.n_players));
            const auto bands = summarize_bands(runs);
            const fs::path dir(sim_out);
            ensure_dir(dir);
            write_file(dir / "season_report.csv", [&](std::ostream& o) { write_season_report(o, runs); });
            auto summary = [&](std::ostream& o) {
                o << fmt::format("seasons {} players {} alpha {:.6f}\n", config.n_seasons, config.n_players, config.alpha);
                o << "end-of-season points at rank, across seasons; expected = ideal-player reference\n";
                write_band_summary(o, bands);
                for (const auto& b : bands) {
                    if (b.rank == 32) o << fmt::format("rank32_median {:.6f} reference {}\n", b.median, b.expected);
                }
            };
            write_file(dir / "summary.txt", summary);
            write_file(dir / "final_rankings.csv", [&](std::ostream& o) {
                o << "season,rank,player,points\n";
                for (const auto& r : runs) {
                    for (std::size_t k = 0; k < r.final_ranking.size(); ++k) {
                        o << r.season << ',' << k + 1 << ',' << r.final_ranking[k].first << ','
                          << r.final_ranking[k].second << '\n';
                    }
                }
            });
            manifest.write(dir);
            summary(out);
            return kExitOk;
        }

        if (*dump) {
            Manifest manifest("ingest-dump");
            dump_in.record(manifest);
            const auto ingest = load_matches(dump_in.files, dump_in.options());
            print_ingest(err, ingest.report);
            const fs::path dir(dump_out);
            ensure_dir(dir);
            write_file(dir / "observations.csv", [&](std::ostream& o) { write_observations(o, ingest.matches); });
            write_file(dir / "ingest_report.txt", [&](std::ostream& o) { write_ingest_report(o, ingest.report); });
            manifest.write(dir);
            return kExitOk;
        }

        if (*table_cmd) {
            if (table_out.empty()) {
                PointTable::standard().write_delimited(out);
            } else {
                write_file(table_out, [](std::ostream& o) { PointTable::standard().write_delimited(o); });
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace atprank
