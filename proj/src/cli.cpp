#include "helix/cli.hpp"

#include "helix/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace helix {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMiss = 2;

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

fs::path prepare_dir(const std::string& out)
{
    const fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    return dir;
}

std::string slug(const std::string& label)
{
    std::string s;
    for (const char ch : label) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        } else if (!s.empty() && s.back() != '_') {
            s += '_';
        }
    }
    while (!s.empty() && s.back() == '_') {
        s.pop_back();
    }
    return s.empty() ? "run" : s;
}

// Flags shared by every subcommand that reads input.
struct InputFlags {
    InputSpec spec;
    std::string format = "auto";
    PenaltyOverrides penalties;
    int fixed_read = 0;
    std::string out;

    void attach(CLI::App* cmd, bool with_penalties)
    {
        auto* fixture = cmd->add_option("--fixture", spec.fixture, "Built-in read set")
                            ->check(CLI::IsMember(fixture_names()));
        auto* input = cmd->add_option("--input", spec.path, "FASTA or one-read-per-line file");
        fixture->excludes(input);
        cmd->add_option("--format", format, "Input format")->check(CLI::IsMember({"auto", "fasta", "plain-lines"}));
        cmd->add_flag("--dedupe", spec.deduplicate, "Drop repeated (label, sequence) records");
        cmd->add_option("--out", out, "Output directory")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        if (with_penalties) {
            cmd->add_option("--penalty-A", penalties.a, "Position constraint weight");
            cmd->add_option("--penalty-B", penalties.b, "Read constraint weight");
            cmd->add_option("--penalty-C", penalties.c, "Overlap weight");
            cmd->add_flag("--normalized", penalties.normalized, "Scale overlaps by 1/max|w| (C = 1/max|w|)");
            cmd->add_option("--fixed-read", fixed_read, "Read pinned to position 0")->check(CLI::NonNegativeNumber);
        }
    }

    [[nodiscard]] InputSpec resolved() const
    {
        if (spec.fixture.empty() && spec.path.empty()) {
            throw CLI::ValidationError("one of --fixture or --input is required");
        }
        InputSpec s = spec;
        s.format = parse_read_format(format);
        return s;
    }
};

Json input_json(const InputSpec& s)
{
    Json j;
    if (!s.fixture.empty()) {
        j["fixture"] = s.fixture;
    } else {
        j["path"] = s.path;
    }
    j["format"] = s.format == ReadFormat::fasta ? "fasta" : s.format == ReadFormat::plain_lines ? "plain-lines" : "auto";
    j["dedupe"] = s.deduplicate;
    return j;
}

Json penalty_json(const PenaltyConfig& p)
{
    return Json{{"A", p.a}, {"B", p.b}, {"C", p.c}};
}

Json manifest(const std::string& command, const std::vector<std::string>& argv, const InputFlags& flags)
{
    Json j;
    j["tool"] = "helix";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["argv"] = argv;
    j["deterministic"] = true;
    j["output"] = flags.out;
    return j;
}

Json order_json(const std::vector<int>& order)
{
    Json a = Json::array();
    for (const int r : order) {
        a.push_back(r);
    }
    return a;
}

Json problem_json(const Problem& p)
{
    Json j;
    j["label"] = p.label;
    j["n_reads"] = p.reads.size();
    j["fixed_read"] = p.qubo.fixed_read;
    j["n_qubits"] = p.qubo.n_vars();
    j["penalties"] = penalty_json(p.qubo.penalties);
    j["e0"] = p.ground.e0;
    j["minimizer_count"] = p.ground.minimizers.size();
    return j;
}

// Decodes the most probable final outcome and compares it with the oracle.
struct Verdict {
    Decoded decoded;
    std::optional<Placement> best;
    bool success = false;
};

Verdict judge(const Problem& p, const RunResult& run)
{
    Verdict v{ConstraintViolation{}, std::nullopt, false};
    if (run.top_states.empty()) {
        return v;
    }
    const BasisOutcome& top = run.top_states.front();
    v.decoded = decode_bitstring(top.index, p.qubo);
    if (p.reads.size() <= kBruteForceLimit) {
        v.best = brute_force_best(p.overlaps, p.qubo.fixed_read);
        const auto* placed = std::get_if<Placement>(&v.decoded);
        v.success = placed != nullptr && placed->total_overlap == v.best->total_overlap;
    } else {
        v.success = top.ground;
    }
    return v;
}

Json decoded_json(const Decoded& d)
{
    if (const auto* p = std::get_if<Placement>(&d)) {
        return Json{{"valid", true}, {"order", order_json(p->order)}, {"total_overlap", p->total_overlap}};
    }
    return Json{{"valid", false}, {"violations", std::get<ConstraintViolation>(d).describe()}};
}

Json solve_summary(const Problem& p, const RunResult& run, const Verdict& v, bool timing)
{
    Json j;
    j["instance"] = problem_json(p);
    Json r = run_summary(run, timing);
    for (std::size_t i = 0; i < run.top_states.size(); ++i) {
        r["top_states"][i]["decoded"] = decoded_json(decode_bitstring(run.top_states[i].index, p.qubo));
    }
    j["run"] = std::move(r);
    if (v.best) {
        j["brute_force"] = Json{{"order", order_json(v.best->order)}, {"total_overlap", v.best->total_overlap}};
    }
    j["top_state_optimal"] = v.success;
    return j;
}

struct RunFlags {
    std::string algorithm = "falqon";
    double dt = 0.01;
    int layers = 300;
    std::optional<double> a;
    std::optional<double> t_f;
    std::optional<double> beta_max;
    int top = 8;
    bool timing = false;

    void attach(CLI::App* cmd, bool with_algorithm)
    {
        if (with_algorithm) {
            cmd->add_option("--algorithm", algorithm, "falqon, tr-falqon or so-falqon")
                ->check(CLI::IsMember({"falqon", "tr-falqon", "so-falqon"}));
        }
        cmd->add_option("--dt", dt, "Layer time step")->check(CLI::PositiveNumber);
        cmd->add_option("--layers", layers, "Maximum number of layers")->check(CLI::PositiveNumber);
        if (with_algorithm) {
            cmd->add_option("--a", a, "Temporal contraction (tr-falqon)");
            cmd->add_option("--tf", t_f, "Final physical time (tr-falqon; default a*layers*dt)");
            cmd->add_option("--beta-max", beta_max, "Clamp on |beta| (so-falqon)")->check(CLI::PositiveNumber);
        }
        cmd->add_option("--top", top, "Most probable outcomes to report")->check(CLI::NonNegativeNumber);
        cmd->add_flag("--timing", timing, "Record wall time in summaries (breaks byte-identical reruns)");
    }

    [[nodiscard]] FeedbackConfig config() const
    {
        FeedbackConfig cfg;
        cfg.algorithm = parse_algorithm(algorithm);
        if (cfg.algorithm != Algorithm::tr_falqon && (a || t_f)) {
            throw CLI::ValidationError("--a and --tf only apply to --algorithm tr-falqon");
        }
        if (cfg.algorithm != Algorithm::so_falqon && beta_max) {
            throw CLI::ValidationError("--beta-max only applies to --algorithm so-falqon");
        }
        cfg.dt = dt;
        cfg.max_layers = layers;
        cfg.a = a.value_or(1.0);
        cfg.t_f = t_f.value_or(cfg.a * layers * dt);
        cfg.beta_max = beta_max;
        cfg.top_states = top;
        cfg.validate();
        return cfg;
    }
};

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(std::vector<std::string> args);

private:
    int overlaps();
    int encode();
    int solve();
    int critical_dt();
    int brute_force();
    int suite();
    int replay();

    void finish(const fs::path& dir, const std::string& command, Json extra = {})
    {
        Json m = manifest(command, argv_, input_);
        for (auto& [k, v] : extra.items()) {
            m[k] = v;
        }
        write_file(dir / "manifest.json", m.dump(2) + "\n");
    }

    std::ostream& out_;
    std::ostream& err_;
    std::vector<std::string> argv_;
    InputFlags input_;
    RunFlags run_;
    std::string encode_format = "all";
    std::string convention = "exact";
    std::vector<double> grid_;
    int refine_ = 0;
    double slack_ = 1e-9;
    std::vector<std::string> suite_fixtures_;
    std::string suite_config_;
    int jobs_ = 1;
    double suite_dt_ = 0.002;
    std::string manifest_path_;
};

int Cli::overlaps()
{
    const ReadSet reads = load_input(input_.resolved());
    const OverlapMatrix m = build_overlap_matrix(reads);
    if (input_.out.empty()) {
        out_ << overlap_csv(m);
        return kExitOk;
    }
    const fs::path dir = prepare_dir(input_.out);
    write_file(dir / "overlaps.csv", overlap_csv(m));
    write_file(dir / "overlaps.json", overlap_json(m));
    finish(dir, "overlaps", Json{{"input", input_json(input_.resolved())}});
    return kExitOk;
}

int Cli::encode()
{
    const InputSpec spec = input_.resolved();
    const ReadSet reads = load_input(spec);
    const OverlapMatrix m = build_overlap_matrix(reads);
    const QuboInstance q = build_qubo(m, input_.penalties.resolve(m), input_.fixed_read);
    const IsingHamiltonian h =
        qubo_to_ising(q, convention == "scaled" ? IsingConvention::scaled : IsingConvention::exact);
    if (input_.out.empty()) {
        if (encode_format == "qubo") {
            out_ << qubo_json(q);
        } else if (encode_format == "pauli") {
            out_ << ising_pauli_text(h);
        } else {
            out_ << ising_json(h);
        }
        return kExitOk;
    }
    const fs::path dir = prepare_dir(input_.out);
    if (encode_format == "all" || encode_format == "qubo") {
        write_file(dir / "qubo.json", qubo_json(q));
    }
    if (encode_format == "all" || encode_format == "ising") {
        write_file(dir / "ising.json", ising_json(h));
    }
    if (encode_format == "all" || encode_format == "pauli") {
        write_file(dir / "ising_pauli.txt", ising_pauli_text(h));
    }
    finish(dir, "encode",
           Json{{"input", input_json(spec)}, {"penalties", penalty_json(q.penalties)}, {"fixed_read", q.fixed_read},
                {"convention", convention}});
    return kExitOk;
}

int Cli::solve()
{
    const FeedbackConfig cfg = run_.config();
    const InputSpec spec = input_.resolved();
    const Problem p = build_problem(spec, input_.penalties, input_.fixed_read);
    const RunResult run = run_feedback(*p.hp, p.ground, cfg);
    const Verdict v = judge(p, run);
    const Json summary = solve_summary(p, run, v, run_.timing);

    if (input_.out.empty()) {
        out_ << summary.dump(2) << "\n";
    } else {
        const fs::path dir = prepare_dir(input_.out);
        write_file(dir / "trace.csv", trace_csv(run));
        write_file(dir / "summary.json", summary.dump(2) + "\n");
        const AssemblyResult assembly = assemble(p.reads, p.overlaps, v.decoded);
        if (assembly.valid) {
            write_file(dir / "assembly.fasta", assembly_fasta(assembly, p.label + "_assembly"));
        } else {
            std::error_code ec;
            fs::remove(dir / "assembly.fasta", ec);
        }
        finish(dir, "solve",
               Json{{"input", input_json(spec)}, {"penalties", penalty_json(p.qubo.penalties)},
                    {"fixed_read", p.qubo.fixed_read}, {"configs", Json::array({config_json(cfg)})}});
    }
    if (!v.success) {
        err_ << "helix: most probable outcome is not an optimal order ("
             << (std::holds_alternative<Placement>(v.decoded) ? "suboptimal order" : "constraint violation") << ")\n";
    }
    return v.success ? kExitOk : kExitMiss;
}

int Cli::critical_dt()
{
    FeedbackConfig cfg = run_.config();
    cfg.algorithm = Algorithm::falqon;
    const InputSpec spec = input_.resolved();
    const Problem p = build_problem(spec, input_.penalties, input_.fixed_read);
    std::vector<double> grid = grid_;
    if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw CLI::ValidationError("--grid must be strictly ascending");
    }
    const CriticalDtScan scan = scan_critical_dt(*p.hp, p.ground, cfg, grid, refine_, slack_);

    std::string csv = "dt,monotone,first_violation,layers,final_energy,refined\n";
    Json verdicts = Json::array();
    for (const DtVerdict& d : scan.verdicts) {
        csv += format_double(d.dt) + "," + (d.monotone ? "1" : "0") + "," + std::to_string(d.first_violation) + ","
               + std::to_string(d.layers) + "," + format_double(d.final_energy) + "," + (d.refined ? "1" : "0") + "\n";
        verdicts.push_back(Json{{"dt", d.dt},
                                {"monotone", d.monotone},
                                {"first_violation", d.first_violation},
                                {"layers", d.layers},
                                {"final_energy", d.final_energy},
                                {"refined", d.refined}});
    }
    Json report{{"instance", problem_json(p)},
                {"layers", cfg.max_layers},
                {"slack", slack_},
                {"verdicts", verdicts},
                {"critical_dt", scan.critical ? Json(*scan.critical) : Json(nullptr)}};
    if (input_.out.empty()) {
        out_ << report.dump(2) << "\n";
    } else {
        const fs::path dir = prepare_dir(input_.out);
        write_file(dir / "critical_dt.csv", csv);
        write_file(dir / "critical_dt.json", report.dump(2) + "\n");
        finish(dir, "critical-dt",
               Json{{"input", input_json(spec)}, {"penalties", penalty_json(p.qubo.penalties)},
                    {"fixed_read", p.qubo.fixed_read}, {"configs", Json::array({config_json(cfg)})}});
    }
    if (!scan.critical) {
        err_ << "helix: no dt in the grid gives a nonincreasing energy trace\n";
        return kExitMiss;
    }
    return kExitOk;
}

int Cli::brute_force()
{
    const InputSpec spec = input_.resolved();
    const ReadSet reads = load_input(spec);
    const OverlapMatrix m = build_overlap_matrix(reads);
    const Placement best = brute_force_best(m, input_.fixed_read);
    const auto optima = brute_force_optima(m, input_.fixed_read);
    Json all = Json::array();
    for (const auto& o : optima) {
        all.push_back(order_json(o));
    }
    Json report{{"order", order_json(best.order)},
                {"total_overlap", best.total_overlap},
                {"optimal_orders", all},
                {"sequence", merge_sequence(reads, best.order)}};
    out_ << format_order(best.order) << " " << best.total_overlap << "\n";
    if (!input_.out.empty()) {
        const fs::path dir = prepare_dir(input_.out);
        write_file(dir / "brute_force.json", report.dump(2) + "\n");
        finish(dir, "brute-force", Json{{"input", input_json(spec)}, {"fixed_read", input_.fixed_read}});
    }
    return kExitOk;
}

int Cli::suite()
{
    std::vector<FeedbackConfig> configs;
    if (!suite_config_.empty()) {
        std::ifstream in(suite_config_);
        if (!in) {
            throw IoError("cannot open " + suite_config_);
        }
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(suite_config_ + ": " + e.what());
        }
        for (const auto& c : j.is_array() ? j : j.at("configs")) {
            configs.push_back(config_from_json(c));
        }
    } else {
        configs = comparison_preset(suite_dt_, run_.layers);
    }
    for (auto& c : configs) {
        c.top_states = run_.top;
    }
    if (suite_fixtures_.empty()) {
        suite_fixtures_.push_back("mito4");
    }

    std::vector<Problem> problems;
    std::vector<SuiteInstance> instances;
    for (const std::string& name : suite_fixtures_) {
        InputSpec spec;
        spec.fixture = name;
        problems.push_back(build_problem(spec, input_.penalties, input_.fixed_read));
        instances.push_back({name, problems.back().hp, problems.back().ground});
    }
    const auto outcomes = run_suite(instances, configs, jobs_);

    const fs::path dir = prepare_dir(input_.out.empty() ? "helix_suite" : input_.out);
    Json rows = Json::array();
    bool failed = false;
    bool missed = false;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const SuiteOutcome& o = outcomes[i];
        const Problem& p = problems[i / configs.size()];
        Json row{{"instance", o.instance}, {"config", o.config}};
        if (!o.result) {
            row["error"] = o.error;
            failed = true;
            err_ << "helix: " << o.instance << " / " << o.config << ": " << o.error << "\n";
        } else {
            const Verdict v = judge(p, *o.result);
            const std::string stem = slug(o.instance) + "__" + slug(o.config);
            write_file(dir / (stem + ".trace.csv"), trace_csv(*o.result));
            write_file(dir / (stem + ".summary.json"), solve_summary(p, *o.result, v, run_.timing).dump(2) + "\n");
            row["trace"] = stem + ".trace.csv";
            row["e0"] = p.ground.e0;
            row["final_energy"] = o.result->final_energy();
            row["final_success_prob"] = o.result->final_success();
            row["layers_executed"] = o.result->layers();
            row["top_state_optimal"] = v.success;
            missed = missed || !v.success;
        }
        rows.push_back(std::move(row));
        out_ << o.instance << "  " << o.config << "  "
             << (o.result ? (rows.back()["top_state_optimal"].get<bool>() ? "optimal" : "miss") : "error") << "\n";
    }
    write_file(dir / "suite.json", Json{{"runs", rows}}.dump(2) + "\n");
    Json cfgs = Json::array();
    for (const auto& c : configs) {
        cfgs.push_back(config_json(c));
    }
    finish(dir, "suite", Json{{"instances", suite_fixtures_}, {"configs", cfgs}});
    return failed ? kExitError : missed ? kExitMiss : kExitOk;
}

int Cli::replay()
{
    std::ifstream in(manifest_path_);
    if (!in) {
        throw IoError("cannot open " + manifest_path_);
    }
    Json m;
    std::vector<std::string> argv;
    try {
        m = Json::parse(in);
        argv = m.at("argv").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(manifest_path_ + ": not a run manifest (" + e.what() + ")");
    }
    if (!argv.empty() && argv.front() == "replay") {
        throw ConfigError(manifest_path_ + ": a replay manifest cannot be replayed");
    }
    if (!input_.out.empty()) {
        argv.push_back("--out");
        argv.push_back(input_.out);
    }
    Cli inner(out_, err_);
    return inner.run(argv);
}

int Cli::run(std::vector<std::string> args)
{
    argv_ = args;
    CLI::App app{"Read ordering with feedback-based quantum optimization (statevector simulation)", "helix"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto* ov = app.add_subcommand("overlaps", "Write the suffix-prefix overlap matrix");
    input_.attach(ov, false);

    auto* enc = app.add_subcommand("encode", "Write the QUBO and Ising encodings");
    input_.attach(enc, true);
    enc->add_option("--what", encode_format, "qubo, ising, pauli or all")
        ->check(CLI::IsMember({"qubo", "ising", "pauli", "all"}));
    enc->add_option("--convention", convention, "Ising convention: exact or scaled")
        ->check(CLI::IsMember({"exact", "scaled"}));

    auto* sol = app.add_subcommand("solve", "Run one feedback algorithm and decode the result");
    input_.attach(sol, true);
    run_.attach(sol, true);

    auto* crit = app.add_subcommand("critical-dt", "Largest FALQON step with a nonincreasing energy trace");
    input_.attach(crit, true);
    run_.attach(crit, false);
    crit->add_option("--grid", grid_, "Ascending dt values")->required()->delimiter(',')->check(CLI::PositiveNumber);
    crit->add_option("--refine", refine_, "Bisection steps above the selected grid value")
        ->check(CLI::NonNegativeNumber);
    crit->add_option("--slack", slack_, "Allowed energy increase per layer")->check(CLI::NonNegativeNumber);

    auto* bf = app.add_subcommand("brute-force", "Best read order by exhaustive search");
    input_.attach(bf, false);
    bf->add_option("--fixed-read", input_.fixed_read, "Read pinned to position 0")->check(CLI::NonNegativeNumber);

    auto* su = app.add_subcommand("suite", "Run a set of configurations over fixtures");
    su->add_option("--fixture", suite_fixtures_, "Fixtures to run (repeatable; default mito4)")
        ->check(CLI::IsMember(fixture_names()));
    su->add_option("--config", suite_config_, "JSON list of feedback configurations (default: five-variant preset)");
    su->add_option("--dt", suite_dt_, "FALQON step the preset is scaled from")->check(CLI::PositiveNumber);
    su->add_option("--layers", run_.layers, "Layer budget for the preset")->check(CLI::PositiveNumber);
    su->add_option("--top", run_.top, "Most probable outcomes to report")->check(CLI::NonNegativeNumber);
    su->add_option("--penalty-A", input_.penalties.a, "Position constraint weight");
    su->add_option("--penalty-B", input_.penalties.b, "Read constraint weight");
    su->add_option("--penalty-C", input_.penalties.c, "Overlap weight");
    su->add_flag("--normalized", input_.penalties.normalized, "Scale overlaps by 1/max|w|");
    su->add_option("--jobs", jobs_, "Concurrent runs")->check(CLI::PositiveNumber);
    su->add_flag("--timing", run_.timing, "Record wall time in summaries");
    su->add_option("--out", input_.out, "Output directory")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    su->add_option("--fixed-read", input_.fixed_read, "Read pinned to position 0")->check(CLI::NonNegativeNumber);

    auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest.json");
    rp->add_option("manifest", manifest_path_, "Manifest to replay")->required();
    rp->add_option("--out", input_.out, "Output directory (default: the recorded one)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (ov->parsed()) {
            return overlaps();
        }
        if (enc->parsed()) {
            return encode();
        }
        if (sol->parsed()) {
            return solve();
        }
        if (crit->parsed()) {
            return critical_dt();
        }
        if (bf->parsed()) {
            return brute_force();
        }
        if (su->parsed()) {
            return suite();
        }
        return replay();
    } catch (const CLI::CallForHelp&) {
        out_ << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out_ << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out_ << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err_ << "helix: " << e.what() << "\n";
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err_ << sub->help();
        return kExitError;
    } catch (const std::exception& e) {
        err_ << "helix: " << e.what() << "\n";
        return kExitError;
    }
}

} // namespace

std::string InputSpec::describe() const { return fixture.empty() ? path : "fixture:" + fixture; }

ReadSet load_input(const InputSpec& input)
{
    LoadOptions opts{input.format, input.deduplicate};
    if (!input.fixture.empty()) {
        ReadSet set = builtin_fixture(input.fixture);
        if (!input.deduplicate) {
            return set;
        }
        return parse_reads(write_reads(set, ReadFormat::fasta), set.source, {ReadFormat::fasta, true});
    }
    if (!fs::exists(input.path)) {
        throw IoError("input file not found: " + input.path);
    }
    return load_reads(input.path, opts);
}

PenaltyConfig PenaltyOverrides::resolve(const OverlapMatrix& overlaps) const
{
    if (normalized && c) {
        throw ConfigError("--normalized sets C itself; drop --penalty-C");
    }
    PenaltyConfig p = normalized ? PenaltyConfig::normalized_for(overlaps) : PenaltyConfig::defaults_for(overlaps, c.value_or(1.0));
    p.a = a.value_or(p.a);
    p.b = b.value_or(p.b);
    p.validate(overlaps);
    return p;
}

Problem build_problem(const InputSpec& input, const PenaltyOverrides& penalties, int fixed_read)
{
    Problem p;
    p.reads = load_input(input);
    p.label = input.fixture.empty() ? fs::path(input.path).stem().string() : input.fixture;
    p.overlaps = build_overlap_matrix(p.reads);
    p.qubo = build_qubo(p.overlaps, penalties.resolve(p.overlaps), fixed_read);
    p.ising = qubo_to_ising(p.qubo);
    auto hp = std::make_shared<DiagonalHamiltonian>(materialize(p.ising));
    p.ground = ground_state(*hp);
    p.hp = std::move(hp);
    return p;
}

std::vector<FeedbackConfig> comparison_preset(double dt, int layers)
{
    auto make = [&](std::string label, Algorithm alg, double step, double a) {
        FeedbackConfig c;
        c.label = std::move(label);
        c.algorithm = alg;
        c.dt = step;
        c.max_layers = layers;
        c.a = a;
        c.t_f = a * layers * step;
        return c;
    };
    return {
        make("FALQON", Algorithm::falqon, dt, 1.0),
        make("TR-FALQON 1", Algorithm::tr_falqon, dt, 1.5),
        make("TR-FALQON 2", Algorithm::tr_falqon, dt, 2.0),
        make("SO-FALQON 1", Algorithm::so_falqon, 1.5 * dt, 1.0),
        make("SO-FALQON 2", Algorithm::so_falqon, 1.75 * dt, 1.0),
    };
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    Cli cli(out, err);
    return cli.run(std::move(args));
}

int run_cli(int argc, char** argv)
{
    return run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

} // namespace helix
