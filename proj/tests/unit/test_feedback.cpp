#include "helix/error.hpp"
#include "helix/feedback.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace helix;

namespace {

struct Instance {
    std::shared_ptr<DiagonalHamiltonian> hp;
    GroundStateInfo ground;
};

Instance fixture(const char* name, bool normalized = false)
{
    const OverlapMatrix m = build_overlap_matrix(builtin_fixture(name));
    const PenaltyConfig p = normalized ? PenaltyConfig::normalized_for(m) : PenaltyConfig::defaults_for(m);
    auto hp = std::make_shared<DiagonalHamiltonian>(materialize(qubo_to_ising(build_qubo(m, p))));
    const GroundStateInfo g = ground_state(*hp);
    return {hp, g};
}

Instance random_instance(int n, std::mt19937_64& rng)
{
    const oracle::Ising m = oracle::random_ising(n, rng);
    auto hp = std::make_shared<DiagonalHamiltonian>(materialize(IsingHamiltonian{n, m.j, m.h, m.constant}));
    const GroundStateInfo g = ground_state(*hp);
    return {hp, g};
}

FeedbackConfig make(Algorithm alg, double dt, int layers)
{
    FeedbackConfig c;
    c.algorithm = alg;
    c.dt = dt;
    c.max_layers = layers;
    c.t_f = layers * dt;
    return c;
}

} // namespace

TEST_CASE("rescaling function")
{
    const double a = 2.5;
    const double tf = 3.0;
    CHECK(rescale_f(0.0, a, tf) == 0.0);
    CHECK(rescale_f(tf / a, a, tf) == doctest::Approx(tf));
    CHECK(rescale_fdot(0.0, a, tf) == 1.0);
    CHECK(rescale_fdot(tf / (2 * a), a, tf) == doctest::Approx(2 * a - 1));
    const double h = 1e-5;
    for (double tau = 0.05; tau < tf / a; tau += 0.1) {
        const double numeric = (rescale_f(tau + h, a, tf) - rescale_f(tau - h, a, tf)) / (2 * h);
        CHECK(std::abs(numeric - rescale_fdot(tau, a, tf)) <= 1e-6);
    }
    for (double tau = 0.0; tau < 2.0; tau += 0.1) {
        CHECK(rescale_fdot(tau, 1.0, tf) == 1.0);
    }
}

TEST_CASE("config validation and layer budget")
{
    FeedbackConfig c = make(Algorithm::tr_falqon, 0.01, 300);
    c.a = 0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.a = 2.0;
    c.t_f = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.t_f = 2.0 * 300 * 0.01;
    CHECK(c.layer_budget() == 300);
    c.t_f = 2.0 * 100 * 0.01;
    CHECK(c.layer_budget() == 100);
    c.t_f = 2.0 * 100.5 * 0.01;
    CHECK(c.layer_budget() == 101);
    CHECK(make(Algorithm::falqon, 0.01, 17).layer_budget() == 17);
    FeedbackConfig bad = make(Algorithm::falqon, -1.0, 10);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(parse_algorithm("qaoa"), ConfigError);
    CHECK(parse_algorithm("tr-falqon") == Algorithm::tr_falqon);

    const Instance inst = fixture("cyclic4");
    CHECK_THROWS_AS(run_falqon(*inst.hp, inst.ground, make(Algorithm::so_falqon, 0.01, 3)), ConfigError);
}

TEST_CASE("FALQON trace matches a dense-matrix simulation")
{
    std::mt19937_64 rng(21);
    for (int n : {1, 2, 3}) {
        const Instance inst = random_instance(n, rng);
        const FeedbackConfig cfg = make(Algorithm::falqon, 0.15, 25);
        const RunResult run = run_falqon(*inst.hp, inst.ground, cfg);

        const oracle::CMat hd = oracle::driver(n);
        const oracle::CMat hp = oracle::diagonal(inst.hp->energies);
        oracle::CVec psi = oracle::CVec::Constant(std::int64_t{1} << n, 1.0 / std::sqrt(double(1 << n)));
        double beta = 0.0;
        for (const TraceRecord& rec : run.trace) {
            psi = oracle::evolve(hd, beta * cfg.dt) * (oracle::evolve(hp, cfg.dt) * psi);
            CHECK(rec.beta == doctest::Approx(beta).epsilon(1e-9));
            CHECK(rec.energy == doctest::Approx(psi.dot(hp * psi).real()).epsilon(1e-9));
            beta = -oracle::commutators(hd, hp, psi).a.real();
        }
    }
}

TEST_CASE("second beta is minus A after one cost layer")
{
    std::mt19937_64 rng(22);
    const Instance inst = random_instance(3, rng);
    const RunResult run = run_falqon(*inst.hp, inst.ground, make(Algorithm::falqon, 0.2, 2));
    const oracle::CMat hp = oracle::diagonal(inst.hp->energies);
    const oracle::CVec psi = oracle::evolve(hp, 0.2) * oracle::CVec::Constant(8, 1.0 / std::sqrt(8.0));
    const double expected = -oracle::commutators(oracle::driver(3), hp, psi).a.real();
    CHECK(run.trace[1].beta == doctest::Approx(expected).epsilon(1e-10));
    CHECK(expected != 0.0);
}

TEST_CASE("every algorithm starts with beta = 0")
{
    const Instance inst = fixture("mito4");
    for (Algorithm alg : {Algorithm::falqon, Algorithm::tr_falqon, Algorithm::so_falqon}) {
        FeedbackConfig cfg = make(alg, 0.002, 3);
        cfg.a = 2.0;
        cfg.t_f = 2.0 * 3 * 0.002;
        const RunResult run = run_feedback(*inst.hp, inst.ground, cfg);
        CHECK(run.trace.front().beta == 0.0);
    }
    const RunResult so = run_so_falqon(*inst.hp, inst.ground, make(Algorithm::so_falqon, 0.002, 2));
    REQUIRE(so.trace.front().commutators);
    CHECK(so.trace.front().commutators->a == 0.0);
    CHECK(*so.trace.front().beta1_candidate == 0.0);
}

TEST_CASE("time-rescaled run with a = 1 is byte-identical to FALQON")
{
    const Instance inst = fixture("mito4");
    const RunResult plain = run_falqon(*inst.hp, inst.ground, make(Algorithm::falqon, 0.002, 300));
    FeedbackConfig tr = make(Algorithm::tr_falqon, 0.002, 300);
    tr.a = 1.0;
    tr.t_f = 300 * 0.002;
    const RunResult rescaled = run_tr_falqon(*inst.hp, inst.ground, tr);
    CHECK(trace_csv(plain) == trace_csv(rescaled));
}

TEST_CASE("time-rescaled layers follow fdot")
{
    const Instance inst = fixture("cyclic4");
    FeedbackConfig tr = make(Algorithm::tr_falqon, 0.002, 300);
    tr.a = 2.0;
    tr.t_f = 2.0 * 300 * 0.002;
    const RunResult run = run_tr_falqon(*inst.hp, inst.ground, tr);
    CHECK(run.layers() == 300);
    for (const TraceRecord& rec : run.trace) {
        REQUIRE(rec.fdot);
        CHECK(*rec.fdot == rescale_fdot((rec.layer - 1) * tr.dt, tr.a, tr.t_f));
    }
    tr.t_f = 2.0 * 50 * 0.002;
    CHECK(run_tr_falqon(*inst.hp, inst.ground, tr).layers() == 50);
}

TEST_CASE("second-order law: hybrid choice, fallback and safety")
{
    const Instance inst = fixture("mito4");
    const FeedbackConfig cfg = make(Algorithm::so_falqon, 0.003, 300);
    const RunResult run = run_so_falqon(*inst.hp, inst.ground, cfg);
    int second_order_layers = 0;
    for (const TraceRecord& rec : run.trace) {
        REQUIRE(rec.commutators);
        REQUIRE(rec.beta1_candidate);
        const CommutatorExpectations& m = *rec.commutators;
        if (rec.degenerate_b) {
            CHECK(std::abs(m.b) <= cfg.degenerate_b);
            CHECK(rec.beta == *rec.beta1_candidate);
            continue;
        }
        REQUIRE(rec.beta2_candidate);
        const double b1 = *rec.beta1_candidate;
        const double b2 = *rec.beta2_candidate;
        if (!rec.clamped) {
            CHECK(rec.beta == (std::abs(b1) > std::abs(b2) ? b2 : b1));
        }
        if (rec.beta == b2) {
            ++second_order_layers;
            // Literal model with the 1/2 on the beta^2 term; nonpositive by construction of beta^(2).
            const double literal =
                cfg.dt * rec.beta * m.a + cfg.dt * cfg.dt * (0.5 * rec.beta * rec.beta * m.b + rec.beta * m.c);
            CHECK(literal <= 1e-12 * std::max(1.0, std::abs(cfg.dt * rec.beta * m.a)));
        } else {
            CHECK(cfg.dt * rec.beta * m.a <= 0.0);
        }
    }
    CHECK(second_order_layers > 0);
    CHECK(run.trace.front().degenerate_b);
}

TEST_CASE("second-order clamp")
{
    const Instance inst = fixture("mito4");
    FeedbackConfig cfg = make(Algorithm::so_falqon, 0.003, 60);
    cfg.beta_max = 5.0;
    const RunResult run = run_so_falqon(*inst.hp, inst.ground, cfg);
    bool any = false;
    for (const TraceRecord& rec : run.trace) {
        CHECK(std::abs(rec.beta) <= 5.0);
        any = any || rec.clamped;
    }
    CHECK(any);
}

TEST_CASE("negative B gives a finite, energy-lowering step")
{
    std::mt19937_64 rng(31);
    const Instance inst = random_instance(2, rng);
    for (int trial = 0; trial < 200; ++trial) {
        const oracle::CVec psi = oracle::random_state(2, rng);
        Statevector s{2, psi};
        const CommutatorExpectations m = commutator_expectations(s, *inst.hp);
        if (m.b >= -1e-3 || std::abs(m.a) < 1e-3) {
            continue;
        }
        const double dt = 1e-3;
        const double b1 = -m.a;
        const double b2 = second_order_candidate(m, dt);
        CHECK(std::isfinite(b2));
        const double beta = std::abs(b1) > std::abs(b2) ? b2 : b1;
        const double before = energy_expectation(s, *inst.hp);
        apply_cost_phase(s, *inst.hp, dt);
        apply_driver_rotation(s, beta, dt);
        CHECK(energy_expectation(s, *inst.hp) < before);
        return;
    }
    FAIL("no state with B < 0 found");
}

TEST_CASE("critical time step search")
{
    const Instance inst = fixture("cyclic4");
    const FeedbackConfig cfg = make(Algorithm::falqon, 0.001, 300);

    const std::vector<double> tiny{1e-5};
    const CriticalDtScan one = scan_critical_dt(*inst.hp, inst.ground, cfg, tiny);
    REQUIRE(one.verdicts.size() == 1);
    CHECK(one.critical == 1e-5);

    const std::vector<double> grid{0.0005, 0.001, 0.002, 0.004, 0.008, 0.05};
    const CriticalDtScan scan = scan_critical_dt(*inst.hp, inst.ground, cfg, grid);
    REQUIRE(scan.critical);
    CHECK(*scan.critical > grid.front());
    CHECK(*scan.critical < grid.back());
    CHECK_FALSE(scan.verdicts.back().monotone);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (grid[i] == *scan.critical) {
            CHECK(scan.verdicts[i].monotone);
            CHECK_FALSE(scan.verdicts[i + 1].monotone);
        }
    }
    FeedbackConfig at = cfg;
    at.dt = *scan.critical;
    CHECK(is_nonincreasing(run_falqon(*inst.hp, inst.ground, at)));

    const CriticalDtScan refined = scan_critical_dt(*inst.hp, inst.ground, cfg, grid, 4);
    CHECK(*refined.critical >= *scan.critical);
    CHECK(refined.verdicts.size() == grid.size() + 4);

    const std::vector<double> large{0.05, 0.1};
    CHECK_THROWS_AS(find_critical_dt(*inst.hp, inst.ground, cfg, large), NotFoundError);
    const std::vector<double> unsorted{0.01, 0.001};
    CHECK_THROWS_AS(scan_critical_dt(*inst.hp, inst.ground, cfg, unsorted), ConfigError);
}

TEST_CASE("suite runs every pair and isolates failures")
{
    const Instance a = fixture("cyclic4");
    const Instance b = fixture("mito4");
    std::vector<SuiteInstance> instances{{"cyclic4", a.hp, a.ground}, {"mito4", b.hp, b.ground}};
    std::vector<FeedbackConfig> configs;
    for (Algorithm alg : {Algorithm::falqon, Algorithm::tr_falqon, Algorithm::so_falqon}) {
        FeedbackConfig c = make(alg, 0.002, 40);
        c.a = 1.5;
        c.t_f = 1.5 * 40 * 0.002;
        c.label = to_string(alg);
        configs.push_back(c);
    }
    FeedbackConfig broken = make(Algorithm::tr_falqon, 0.002, 40);
    broken.a = 0.5;
    broken.label = "broken";
    configs.push_back(broken);

    const auto serial = run_suite(instances, configs, 1);
    const auto parallel = run_suite(instances, configs, 3);
    REQUIRE(serial.size() == 8);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].instance == parallel[i].instance);
        CHECK(serial[i].config == parallel[i].config);
        CHECK(serial[i].result.has_value() == (serial[i].config != "broken"));
        if (serial[i].result) {
            CHECK(trace_csv(*serial[i].result) == trace_csv(*parallel[i].result));
        } else {
            CHECK(serial[i].error.find("a must be") != std::string::npos);
        }
    }
    CHECK(run_suite(instances, {}, 2).empty());
}

TEST_CASE("trace csv, summary and config json")
{
    const Instance inst = fixture("mito4");
    FeedbackConfig cfg = make(Algorithm::so_falqon, 0.003, 5);
    cfg.label = "SO-FALQON 1";
    const RunResult run = run_so_falqon(*inst.hp, inst.ground, cfg);
    const std::string csv = trace_csv(run);
    CHECK(csv.rfind("layer,beta,energy,success_prob,beta1_candidate,beta2_candidate,fdot\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    // layer 1 is degenerate: no second-order candidate and no fdot
    CHECK(csv.find("\n1,0,") != std::string::npos);

    const auto summary = run_summary(run);
    CHECK(summary["layers_executed"] == 5);
    CHECK(summary["e0"].get<double>() == inst.ground.e0);
    CHECK_FALSE(summary.contains("wall_time_s"));
    CHECK(run_summary(run, true).contains("wall_time_s"));
    double total = 0.0;
    double last = 1.0;
    for (const auto& t : summary["top_states"]) {
        CHECK(t["probability"].get<double>() <= last);
        last = t["probability"];
        total += last;
    }
    CHECK(total <= 1.0 + 1e-12);

    const FeedbackConfig back = config_from_json(config_json(cfg));
    CHECK(back.label == cfg.label);
    CHECK(back.algorithm == cfg.algorithm);
    CHECK(back.dt == cfg.dt);
    CHECK(back.max_layers == cfg.max_layers);
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("identical runs give identical bytes")
{
    const Instance inst = fixture("mito4");
    const FeedbackConfig cfg = make(Algorithm::so_falqon, 0.003, 100);
    CHECK(trace_csv(run_so_falqon(*inst.hp, inst.ground, cfg)) == trace_csv(run_so_falqon(*inst.hp, inst.ground, cfg)));
}

TEST_CASE("observer can stop a run")
{
    const Instance inst = fixture("cyclic4");
    const RunResult run = run_falqon(*inst.hp, inst.ground, make(Algorithm::falqon, 0.002, 100),
                                     [](const TraceRecord& rec, const Statevector&) { return rec.layer < 7; });
    CHECK(run.layers() == 7);
}
