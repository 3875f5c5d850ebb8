#include "ccg/experiments.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "ccg/accept.hpp"
#include "ccg/cltm.hpp"
#include "ccg/covariance.hpp"
#include "ccg/isoperimetry.hpp"
#include "ccg/isotropy.hpp"
#include "ccg/moments.hpp"
#include "ccg/volume.hpp"

namespace ccg::cli {

using rep::Json;

namespace {

struct Ctx {
    const ExperimentConfig& cfg;
    rep::ReportWriter writer;
    std::uint64_t seed;
    int workers;
    int replicas;

    Ctx(const ExperimentConfig& c, const std::string& default_out)
        : cfg(c),
          writer(c.get_string("out", default_out)),
          seed(c.require_seed()),
          workers(static_cast<int>(c.get_long("workers", 0))),
          replicas(static_cast<int>(c.get_long("replicas", 16))) {}
};

std::string fmt_row(std::initializer_list<double> vals) {
    std::string row;
    for (double v : vals) {
        if (!row.empty()) row += ",";
        row += rep::format_double(v);
    }
    return row;
}

int run_sample(Ctx& ctx) {
    ctx.cfg.check_allowed({"count"});
    const auto spec = ctx.cfg.spec();
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 1000));
    num::RngStream rng(ctx.seed, 0);
    const auto batch = dist::sample(spec, count, rng);

    std::vector<std::string> rows;
    for (std::size_t i = 0; i < batch.count; ++i) {
        std::string row;
        for (double v : batch.row(i)) {
            if (!row.empty()) row += ",";
            row += rep::format_double(v);
        }
        rows.push_back(std::move(row));
    }
    std::string header;
    for (int j = 0; j < batch.n; ++j)
        header += (j ? ",x" : "x") + std::to_string(j);
    ctx.writer.csv("samples.csv", header, rows);
    ctx.writer.record(Json{{"experiment", "sample"},
                           {"spec", rep::spec_json(spec)},
                           {"count", batch.count},
                           {"seed", batch.seed},
                           {"walk_budget", batch.walk_budget}});
    ctx.writer.write_jsonl("sample.jsonl");
    return exit_ok;
}

int run_shell(Ctx& ctx) {
    ctx.cfg.check_allowed(
        {"dims", "count", "t_grid", "tail_form", "big_c", "small_c"});
    const auto dims = ctx.cfg.get_dims("dims", {16, 64});
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 50000));
    const auto t_grid = ctx.cfg.get_grid("t_grid", {0.05, 0.1, 0.2, 0.5, 1.0});
    const double big_c = ctx.cfg.get_double("big_c", 3.0);
    const double small_c = ctx.cfg.get_double("small_c", 1.0);

    std::vector<std::string> tail_rows;
    for (long n : dims) {
        auto cfg_spec = ctx.cfg;
        cfg_spec.set("n", std::to_string(n));
        const auto spec = cfg_spec.spec();
        num::RngStream rng(ctx.seed, static_cast<std::uint64_t>(n));
        const auto s =
            conc::shell_stats(spec, count, ctx.replicas, t_grid, rng,
                              ctx.workers);
        Json j{{"experiment", "shell"},
               {"spec", rep::spec_json(spec)},
               {"samples_per_replica", count},
               {"mean_norm", rep::summary_json(s.mean_norm)},
               {"var_norm", rep::summary_json(s.var_norm)},
               {"var_norm_sq", rep::summary_json(s.var_norm_sq)},
               {"var_ratio", rep::summary_json(s.var_ratio)}};
        Json tails = Json::array();
        for (const auto& pt : s.tail) {
            tails.push_back(Json{{"t", pt.t},
                                 {"prob", pt.prob},
                                 {"ci_lo", pt.ci_lo},
                                 {"ci_hi", pt.ci_hi},
                                 {"count", pt.count},
                                 {"degenerate", pt.degenerate}});
            tail_rows.push_back(std::to_string(n) + "," +
                                fmt_row({pt.t, pt.prob, pt.ci_lo, pt.ci_hi}));
        }
        j["tail"] = tails;
        ctx.writer.record(j);

        // functional-form ledgers with configured constants
        const auto form = ctx.cfg.get_string(
            "tail_form",
            spec.family == dist::Family::sconcave_gc ? "sconcave" : "gm");
        const conc::TailForm tf =
            form == "paouris"      ? conc::TailForm::paouris
            : form == "small-ball" ? conc::TailForm::small_ball
            : form == "sconcave"   ? conc::TailForm::sconcave
                                   : conc::TailForm::gm;
        num::RngStream rng2(ctx.seed, static_cast<std::uint64_t>(n) + 1000);
        const auto ledger = conc::tail_form_check(
            spec, tf, t_grid, big_c, small_c, count, ctx.replicas, rng2,
            ctx.workers);
        for (const auto& row : ledger.rows) {
            ctx.writer.record(Json{{"experiment", "tail-form"},
                                   {"spec", rep::spec_json(spec)},
                                   {"form", conc::tail_form_name(tf)},
                                   {"t", row.t},
                                   {"estimate", row.empirical},
                                   {"ci", Json{{"lo", row.ci_lo}, {"hi", row.ci_hi}}},
                                   {"bound_value", row.bound},
                                   {"constants_used",
                                    Json{{"C", big_c}, {"c", small_c}}},
                                   {"markov_bound", row.markov_bound},
                                   {"markov_feasible", row.markov_feasible},
                                   {"unobservable", row.unobservable},
                                   {"pass", row.satisfied}});
        }
    }
    ctx.writer.csv("shell_tails.csv", "n,t,prob,ci_lo,ci_hi", tail_rows);
    ctx.writer.write_jsonl("shell.jsonl");
    return exit_ok;
}

int run_moments(Ctx& ctx) {
    ctx.cfg.check_allowed({"count", "p_grid", "directions"});
    const auto spec = ctx.cfg.spec();
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 50000));
    const auto p_grid =
        ctx.cfg.get_grid("p_grid", conc::default_p_grid(spec.n));
    const int dirs = static_cast<int>(ctx.cfg.get_long("directions", 64));

    num::RngStream rng(ctx.seed, 0);
    const auto prof = conc::moment_profile(spec, p_grid, count, ctx.replicas,
                                           dirs, rng, ctx.workers);
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const auto& st = prof.strong[i];
        const auto& wk = prof.weak[i];
        ctx.writer.record(Json{
            {"experiment", "moments"},
            {"spec", rep::spec_json(spec)},
            {"p", p_grid[i]},
            {"strong",
             Json{{"value", st.value}, {"ci_lo", st.lo}, {"ci_hi", st.hi},
                  {"median_of_means", st.median_of_means},
                  {"unstable", st.unstable}}},
            {"weak",
             Json{{"value", wk.estimate.value},
                  {"ci_lo", wk.estimate.lo},
                  {"ci_hi", wk.estimate.hi},
                  {"lower_bound", true},
                  {"search", wk.provenance}}},
            {"mean_norm", prof.mean_norm.value}});
        rows.push_back(fmt_row({p_grid[i], st.value, st.lo, st.hi,
                                wk.estimate.value, wk.estimate.lo,
                                wk.estimate.hi}));
    }
    ctx.writer.csv("moments.csv",
                   "p,strong,strong_lo,strong_hi,weak,weak_lo,weak_hi", rows);
    ctx.writer.write_jsonl("moments.jsonl");
    return exit_ok;
}

int run_weak_strong(Ctx& ctx) {
    ctx.cfg.check_allowed({"count", "p_grid", "norm", "ratio_budget"});
    const auto spec = ctx.cfg.spec();
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 50000));
    const auto p_grid =
        ctx.cfg.get_grid("p_grid", conc::default_p_grid(spec.n));
    const std::string norm_name = ctx.cfg.get_string("norm", "l2");
    const double budget = ctx.cfg.get_double("ratio_budget", 2.0);
    conc::NormKind norm;
    if (norm_name == "l2") norm = conc::NormKind::l2;
    else if (norm_name == "l1") norm = conc::NormKind::l1;
    else if (norm_name == "linf") norm = conc::NormKind::linf;
    else throw ConfigError("config: norm must be l2, l1 or linf");

    num::RngStream rng(ctx.seed, 0);
    const auto pts = conc::weak_strong_check(spec, p_grid, norm, count,
                                             ctx.replicas, rng, ctx.workers);
    std::vector<std::string> rows;
    bool all_pass = true;
    for (const auto& pt : pts) {
        const bool pass = pt.ratio <= budget;
        all_pass = all_pass && pass;
        ctx.writer.record(Json{{"experiment", "weak-strong"},
                               {"spec", rep::spec_json(spec)},
                               {"norm", norm_name},
                               {"p", pt.p},
                               {"estimate", pt.ratio},
                               {"ci", Json{{"lo", pt.ci_lo}, {"hi", pt.ci_hi}}},
                               {"strong", pt.strong},
                               {"mean_norm", pt.mean_norm},
                               {"sigma_lower_bound", pt.sigma},
                               {"bound_value", budget},
                               {"pass", pass}});
        rows.push_back(fmt_row({pt.p, pt.ratio, pt.ci_lo, pt.ci_hi, pt.strong,
                                pt.mean_norm, pt.sigma}));
    }
    ctx.writer.csv("weak_strong.csv",
                   "p,ratio,ci_lo,ci_hi,strong,mean_norm,sigma", rows);
    ctx.writer.write_jsonl("weak_strong.jsonl");
    return all_pass ? exit_ok : exit_ok;  // informational; budgets are config
}

int run_cov_approx(Ctx& ctx) {
    ctx.cfg.check_allowed({"eps_grid", "eta", "base_samples", "max_samples"});
    const auto spec = ctx.cfg.spec();
    const auto eps_grid = ctx.cfg.get_grid("eps_grid", {0.25, 0.5, 0.9});
    const double eta = ctx.cfg.get_double("eta", 0.1);
    const auto base =
        static_cast<std::size_t>(ctx.cfg.get_long("base_samples", 512));
    const auto maxn =
        static_cast<std::size_t>(ctx.cfg.get_long("max_samples", 16384));

    num::RngStream rng(ctx.seed, 0);
    const auto curve = cov::sample_complexity_curve(
        spec, eps_grid, eta, ctx.replicas, base, maxn, rng, ctx.workers);

    // raw medians per grid N plus reference curves
    std::vector<std::string> med_rows;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        ctx.writer.record(Json{{"experiment", "cov-approx"},
                               {"spec", rep::spec_json(spec)},
                               {"samples", curve.grid[i]},
                               {"median_eps", curve.median_eps[i]}});
        med_rows.push_back(std::to_string(curve.grid[i]) + "," +
                           rep::format_double(curve.median_eps[i]));
    }
    ctx.writer.csv("cov_median.csv", "N,median_eps", med_rows);

    std::vector<std::string> rows;
    bool exhausted = false;
    for (const auto& pt : curve.points) {
        exhausted = exhausted || pt.budget_exhausted;
        ctx.writer.record(Json{{"experiment", "cov-approx"},
                               {"spec", rep::spec_json(spec)},
                               {"eps", pt.eps},
                               {"n_star", pt.n_star},
                               {"success", pt.success},
                               {"ci", Json{{"lo", pt.ci_lo}, {"hi", pt.ci_hi}}},
                               {"unresolved_eta", pt.unresolved_eta},
                               {"budget_exhausted", pt.budget_exhausted},
                               {"reference",
                                Json{{"kls_quadratic",
                                      cov::reference_n_quadratic(spec.n, pt.eps)},
                                     {"bourgain_polylog",
                                      cov::reference_n_polylog(spec.n, pt.eps)},
                                     {"linear", cov::reference_n_linear(
                                                    spec.n, pt.eps)}}}});
        rows.push_back(std::to_string(pt.n_star) + "," +
                       fmt_row({pt.eps, pt.success, pt.ci_lo, pt.ci_hi}));
    }
    ctx.writer.csv("cov_curve.csv", "n_star,eps,success_freq,ci_low,ci_high",
                   rows);
    ctx.writer.write_jsonl("cov_approx.jsonl");
    return exhausted ? exit_budget_exhausted : exit_ok;
}

int run_clt(Ctx& ctx) {
    ctx.cfg.check_allowed({"count", "directions", "thresholds", "tau",
                           "correlated"});
    const auto spec = ctx.cfg.spec();
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 100000));
    const int dirs = static_cast<int>(ctx.cfg.get_long("directions", 200));
    const auto thresholds = ctx.cfg.get_grid("thresholds", {0.02, 0.03, 0.057});
    const double tau = ctx.cfg.get_double("tau", 1.0);
    const bool correlated = ctx.cfg.get_bool("correlated", false);

    // named directions first
    num::Vec e1(spec.n, 0.0);
    e1[0] = 1.0;
    num::Vec diag(spec.n,
                  1.0 / std::sqrt(static_cast<double>(spec.n)));
    num::RngStream rng(ctx.seed, 1);
    const double ks_e1 = clt::marginal_ks(spec, e1, count, rng);
    num::RngStream rng2(ctx.seed, 2);
    const double ks_diag = clt::marginal_ks(spec, diag, count, rng2);
    ctx.writer.record(Json{{"experiment", "clt"},
                           {"spec", rep::spec_json(spec)},
                           {"direction", "e1"},
                           {"ks", ks_e1},
                           {"classical_bound", clt::classical_be_bound(e1, tau)}});
    ctx.writer.record(Json{{"experiment", "clt"},
                           {"spec", rep::spec_json(spec)},
                           {"direction", "diagonal"},
                           {"ks", ks_diag},
                           {"classical_bound",
                            clt::classical_be_bound(diag, tau)}});

    num::RngStream rng3(ctx.seed, 3);
    const auto survey = clt::direction_survey(spec, dirs, count, thresholds,
                                              rng3, ctx.workers, correlated);
    std::vector<std::string> rows;
    for (std::size_t d = 0; d < survey.ks.size(); ++d) {
        std::string flags;
        for (const auto& [thr, frac] : survey.threshold_fractions)
            flags += std::string(flags.empty() ? "" : ";") +
                     (survey.ks[d] <= thr ? "1" : "0");
        rows.push_back(std::to_string(d) + "," +
                       rep::format_double(survey.ks[d]) + "," + flags);
    }
    ctx.writer.csv("clt_directions.csv", "direction_id,ks,threshold_flags",
                   rows);
    Json fr = Json::array();
    for (const auto& [thr, frac] : survey.threshold_fractions)
        fr.push_back(Json{{"threshold", thr}, {"fraction_below", frac}});
    ctx.writer.record(Json{{"experiment", "clt-survey"},
                           {"spec", rep::spec_json(spec)},
                           {"directions", dirs},
                           {"quantiles",
                            Json{{"q10", survey.q10},
                                 {"q25", survey.q25},
                                 {"median", survey.median},
                                 {"q75", survey.q75},
                                 {"q90", survey.q90}}},
                           {"fractions", fr}});
    ctx.writer.write_jsonl("clt.jsonl");
    return exit_ok;
}

int run_abp(Ctx& ctx) {
    ctx.cfg.check_allowed({"dims", "count", "grid_step"});
    const auto dims = ctx.cfg.get_dims("dims", {16, 64, 256});
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 50000));
    const double step = ctx.cfg.get_double("grid_step", 0.005);

    for (long n : dims) {
        auto cfg_spec = ctx.cfg;
        cfg_spec.set("n", std::to_string(n));
        const auto spec = cfg_spec.spec();
        num::RngStream rng(ctx.seed, static_cast<std::uint64_t>(n));
        const auto res =
            clt::abp_epsilon(spec, count, ctx.replicas, step, rng, ctx.workers);
        ctx.writer.record(Json{{"experiment", "abp"},
                               {"spec", rep::spec_json(spec)},
                               {"estimate", res.eps_star},
                               {"ci", Json{{"lo", res.ci_lo}, {"hi", res.ci_hi}}},
                               {"grid_step", res.grid_step},
                               {"at_grid_floor", res.at_grid_floor}});
    }
    ctx.writer.write_jsonl("abp.jsonl");
    return exit_ok;
}

int run_isoperimetry(Ctx& ctx) {
    ctx.cfg.check_allowed(
        {"count", "direction_count", "t_grid", "eps", "boundary_offset"});
    const auto spec = ctx.cfg.spec();
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 200000));
    const int dir_count =
        static_cast<int>(ctx.cfg.get_long("direction_count", 8));
    std::vector<double> default_grid;
    for (double t = -4.5; t <= 4.51; t += 0.25) default_grid.push_back(t);
    const auto t_grid = ctx.cfg.get_grid("t_grid", default_grid);
    const double eps = ctx.cfg.get_double("eps", 0.01);

    // boundary measure of a coordinate half space
    num::Vec e1(spec.n, 0.0);
    e1[0] = 1.0;
    const double offset = ctx.cfg.get_double("boundary_offset", 0.0);
    num::RngStream rng(ctx.seed, 1);
    const auto bm =
        isop::boundary_measure(spec, isop::SetSpec::halfspace(e1, offset), eps,
                               count / 4, ctx.replicas, rng, ctx.workers);
    ctx.writer.record(Json{{"experiment", "isoperimetry"},
                           {"spec", rep::spec_json(spec)},
                           {"quantity", "boundary_measure_halfspace"},
                           {"offset", offset},
                           {"eps", eps},
                           {"estimate", bm.value},
                           {"ci", Json{{"lo", bm.lo}, {"hi", bm.hi}}},
                           {"eps_too_large", bm.eps_too_large}});

    num::RngStream rng2(ctx.seed, 2);
    const auto ch = isop::halfspace_cheeger(spec, dir_count, t_grid,
                                            count, rng2, ctx.workers);
    ctx.writer.record(
        Json{{"experiment", "isoperimetry"},
             {"spec", rep::spec_json(spec)},
             {"quantity", "halfspace_conductance_upper_bound_for_h"},
             {"estimate", ch.h_upper},
             {"best_direction", ch.best_direction},
             {"best_t", ch.best_t},
             {"label", "half-space conductance (upper bound for h)"}});
    std::vector<std::string> rows;
    for (const auto& probe : ch.probes)
        rows.push_back(std::to_string(probe.direction_id) + "," +
                       fmt_row({probe.t, probe.density, probe.cdf,
                                probe.ratio}) +
                       "," + (probe.skipped ? "1" : "0"));
    ctx.writer.csv("cheeger_curves.csv", "direction,t,density,F,ratio,skipped",
                   rows);

    num::RngStream rng3(ctx.seed, 3);
    const auto shell = conc::shell_stats(spec, count / 4, ctx.replicas,
                                         {0.1, 0.5}, rng3, ctx.workers);
    const auto lb = isop::cheeger_lower_bounds(shell);
    ctx.writer.record(Json{
        {"experiment", "isoperimetry"},
        {"spec", rep::spec_json(spec)},
        {"quantity", "cheeger_lower_bounds"},
        {"label", "up to universal constant (set to 1)"},
        {"kls", lb.kls},
        {"bobkov", lb.bobkov},
        {"eldan", lb.eldan},
        {"gm_implied", lb.gm_implied}});

    num::RngStream rng4(ctx.seed, 4);
    const auto probes = isop::poincare_probe_family(spec, count / 4,
                                                    ctx.replicas, rng4,
                                                    ctx.workers);
    double min_quotient = std::numeric_limits<double>::infinity();
    for (const auto& probe : probes) {
        min_quotient = std::min(min_quotient, probe.estimate.quotient);
        ctx.writer.record(Json{{"experiment", "isoperimetry"},
                               {"spec", rep::spec_json(spec)},
                               {"quantity", "poincare_quotient"},
                               {"probe", probe.name},
                               {"estimate", probe.estimate.quotient},
                               {"ci", Json{{"lo", probe.estimate.ci_lo},
                                           {"hi", probe.estimate.ci_hi}}},
                               {"var_f", probe.estimate.var_f},
                               {"lipschitz", probe.lipschitz},
                               {"d_inf_certificate", probe.d_inf_certificate}});
    }
    // cross-reference ratios, displayed but never asserted
    ctx.writer.record(Json{
        {"experiment", "isoperimetry"},
        {"spec", rep::spec_json(spec)},
        {"quantity", "cross_reference_ratios"},
        {"h_upper_sq_over_min_quotient",
         ch.h_upper * ch.h_upper / min_quotient},
        {"label", "h^2 vs D2 vs Dinf ratios (unknown universal constants)"}});
    ctx.writer.write_jsonl("isoperimetry.jsonl");
    return exit_ok;
}

int run_kp_body(Ctx& ctx) {
    ctx.cfg.check_allowed({"order", "directions", "tol"});
    const auto spec = ctx.cfg.spec();
    const double p = ctx.cfg.get_double("order", 2.0);
    const int dirs = static_cast<int>(ctx.cfg.get_long("directions", 100));
    const double tol = ctx.cfg.get_double("tol", 1e-10);

    num::RngStream rng(ctx.seed, 0);
    std::vector<std::string> rows;
    double min_r = std::numeric_limits<double>::infinity(), max_r = 0.0;
    for (int d = 0; d < dirs; ++d) {
        const num::Vec theta = rng.unit_sphere(spec.n);
        const double r = iso::ball_body_radial(spec, p, theta, tol);
        min_r = std::min(min_r, r);
        max_r = std::max(max_r, r);
        std::string row;
        for (double v : theta) {
            if (!row.empty()) row += ",";
            row += rep::format_double(v);
        }
        rows.push_back(row + "," + rep::format_double(r));
    }
    std::string header;
    for (int j = 0; j < spec.n; ++j)
        header += (j ? ",theta" : "theta") + std::to_string(j);
    header += ",r";
    ctx.writer.csv("kp_radial.csv", header, rows);
    ctx.writer.record(Json{{"experiment", "kp-body"},
                           {"spec", rep::spec_json(spec)},
                           {"order", p},
                           {"directions", dirs},
                           {"radial_min", min_r},
                           {"radial_max", max_r}});
    ctx.writer.write_jsonl("kp_body.jsonl");
    return exit_ok;
}

int run_sections(Ctx& ctx) {
    ctx.cfg.check_allowed({"count", "direction"});
    const auto body = vol::parse_body(ctx.cfg.require_string("body"));
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 40000));
    const std::string dname = ctx.cfg.get_string("direction", "e1");

    num::Vec theta(body.dim, 0.0);
    if (dname == "e1") {
        theta[0] = 1.0;
    } else if (dname == "diagonal") {
        theta.assign(body.dim, 1.0 / std::sqrt(static_cast<double>(body.dim)));
    } else {
        throw ConfigError("config: direction must be e1 or diagonal");
    }
    num::RngStream rng(ctx.seed, 0);
    const auto s = iso::section_volume(body, theta, count, ctx.replicas, rng,
                                       ctx.workers);
    ctx.writer.record(Json{{"experiment", "sections"},
                           {"body", body.descriptor},
                           {"direction", dname},
                           {"estimate", s.value},
                           {"ci", Json{{"lo", s.lo}, {"hi", s.hi}}}});
    ctx.writer.write_jsonl("sections.jsonl");
    return exit_ok;
}

int run_volume(Ctx& ctx) {
    ctx.cfg.check_allowed({"eps", "eta", "round_samples", "max_steps"});
    const auto body = vol::parse_body(ctx.cfg.require_string("body"));
    const double eps = ctx.cfg.get_double("eps", 0.05);
    const double eta = ctx.cfg.get_double("eta", 0.05);
    const auto round_samples =
        static_cast<std::size_t>(ctx.cfg.get_long("round_samples", 20000));
    const long max_steps = ctx.cfg.get_long("max_steps", 200000000);

    num::RngStream rround(ctx.seed, 1);
    const auto rounded =
        vol::round_body(body, round_samples,
                        ctx.cfg.get_long("walk_budget", 0), rround);
    num::RngStream rvol(ctx.seed, 2);
    const auto est = vol::volume_multiphase(rounded.body, eps, eta, rvol,
                                            ctx.workers, ctx.replicas,
                                            max_steps, rounded.d_hat);
    const double jac = std::fabs(num::lu_det(rounded.map.linear));
    const double volume = est.value / jac;
    Json phases = Json::array();
    for (std::size_t i = 0; i < est.phase_ratios.size(); ++i)
        phases.push_back(Json{{"fraction", est.phase_fractions[i]},
                              {"ratio", est.phase_ratios[i]}});
    ctx.writer.record(Json{{"experiment", "volume"},
                           {"body", body.descriptor},
                           {"estimate", volume},
                           {"ci", Json{{"lo", est.lo / jac}, {"hi", est.hi / jac}}},
                           {"rel_ci", est.rel_ci},
                           {"rounding",
                            Json{{"d_hat", rounded.d_hat},
                                 {"jacobian", jac}}},
                           {"phases", phases},
                           {"phase_count", est.phases},
                           {"oracle_calls", est.oracle_calls},
                           {"walk",
                            Json{{"burn_in", est.burn_in},
                                 {"thin", est.thin},
                                 {"samples_per_phase", est.samples_per_phase},
                                 {"replicas", est.replicas}}},
                           {"budget_exhausted", est.budget_exhausted},
                           {"exact_volume_if_known",
                            body.exact_volume ? Json(*body.exact_volume)
                                              : Json(nullptr)}});
    ctx.writer.write_jsonl("volume.jsonl");
    return est.budget_exhausted ? exit_budget_exhausted : exit_ok;
}

int run_hull(Ctx& ctx) {
    ctx.cfg.check_allowed({"count", "points", "dim"});
    const int n = static_cast<int>(ctx.cfg.get_long("dim", 3));
    const auto points =
        static_cast<std::size_t>(ctx.cfg.get_long("points", 16));
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 25000));
    num::RngStream rng(ctx.seed, 0);
    const auto res =
        vol::hull_volume_ratio(n, points, count, ctx.replicas, rng,
                               ctx.workers);
    ctx.writer.record(Json{{"experiment", "hull"},
                           {"dim", n},
                           {"points", res.points},
                           {"estimate", res.ratio_root},
                           {"ci", Json{{"lo", res.ci_lo}, {"hi", res.ci_hi}}},
                           {"reference_bound", res.reference_bound},
                           {"estimate_over_bound", res.estimate_over_bound},
                           {"resampled_indeterminate", res.resampled}});
    ctx.writer.write_jsonl("hull.jsonl");
    return exit_ok;
}

int run_proof_check(Ctx& ctx) {
    ctx.cfg.check_allowed({"count", "draws", "order"});
    const auto spec = ctx.cfg.spec();
    const double p = ctx.cfg.get_double("order", 2.0);
    const auto count =
        static_cast<std::size_t>(ctx.cfg.get_long("count", 100000));
    const int draws = static_cast<int>(ctx.cfg.get_long("draws", 100));

    num::RngStream rng(ctx.seed, 0);
    const auto repc =
        conc::proof_chain_check(spec, p, count, draws, rng, ctx.workers);
    ctx.writer.record(Json{
        {"experiment", "proof-check"},
        {"spec", rep::spec_json(spec)},
        {"p", repc.p},
        {"m", repc.m},
        {"sigma_p", repc.sigma_p},
        {"concentration_step",
         Json{{"lhs", repc.step1_lhs},
              {"main", repc.step1_main},
              {"implied_c", repc.step1_implied_c}}},
        {"minmax_step",
         Json{{"lhs", repc.step2_lhs},
              {"main", repc.step2_main},
              {"implied_c", repc.step2_implied_c}}},
        {"gauge_step",
         Json{{"draws", repc.draws},
              {"holds", repc.gauge_step_holds},
              {"lambda_mean", repc.lambda_mean}}}});

    // a matching H(p, lambda) report on an identity-like projection
    num::RngStream hrng(ctx.seed, 1);
    num::Mat proj(static_cast<std::size_t>(repc.m),
                  static_cast<std::size_t>(spec.n));
    for (int i = 0; i < repc.m; ++i) proj.at(i, i) = 1.0;
    const auto h = conc::h_condition_ratio(spec, p, proj,
                                           conc::GaugeKind::euclidean, count,
                                           hrng);
    ctx.writer.record(Json{{"experiment", "h-condition"},
                           {"spec", rep::spec_json(spec)},
                           {"p", h.p},
                           {"m", h.m},
                           {"gauge", h.gauge},
                           {"lambda_hat", h.lambda_hat},
                           {"note",
                            "named-gauge check only; a failure never refutes "
                            "H(p,lambda), which is existential over gauges"}});
    ctx.writer.write_jsonl("proof_chain.jsonl");
    return exit_ok;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
    static const std::vector<ExperimentInfo> catalog = {
        {"sample", "draw a batch and write it as CSV",
         "family n isotropic count [p r gauge body walk_budget]",
         "sample log_density"},
        {"shell", "thin-shell statistics and tail-form ledgers",
         "family dims count t_grid [tail_form big_c small_c]",
         "shell_stats tail_form_check"},
        {"moments", "strong/weak moment profile over a p-grid",
         "family n count p_grid [directions]",
         "strong_moment weak_moment"},
        {"weak-strong", "moment comparison ratios for a norm",
         "family n count p_grid norm [ratio_budget]", "weak_strong_check"},
        {"cov-approx", "empirical covariance sample-complexity curve",
         "family n eps_grid eta [base_samples max_samples]",
         "cov_deviation sample_complexity_curve"},
        {"clt", "marginal Kolmogorov distances and direction surveys",
         "family n count directions [thresholds tau correlated]",
         "marginal_ks direction_survey classical_be_bound"},
        {"abp", "thin-shell epsilon fixed points across dimensions",
         "family dims count [grid_step]", "abp_epsilon"},
        {"isoperimetry", "boundary measure, conductance, Poincare quotients",
         "family n count direction_count [t_grid eps]",
         "boundary_measure halfspace_cheeger cheeger_lower_bounds "
         "poincare_quotient gaussian_halfspace_profile"},
        {"kp-body", "radial table of the moment body of a density",
         "family n order directions [tol]",
         "ball_body_radial midpoint_logconcavity"},
        {"sections", "central hyperplane section volume of a body",
         "body count [direction]",
         "section_volume empirical_isotropy isotropic_constant_body "
         "isotropic_constant_density"},
        {"volume", "rounding plus multiphase Monte-Carlo volume",
         "body [eps eta round_samples max_steps]",
         "hit_and_run_step round_body volume_multiphase"},
        {"hull", "absolute convex hull volume ratios",
         "dim points count", "hull_volume_ratio"},
        {"proof-check", "three-step inequality chain at small scale",
         "family n order count draws",
         "proof_chain_check h_condition_ratio borell_growth sconcave_params"},
        {"accept", "run the acceptance suite",
         "seed [out workers]", "run"},
        {"list", "this catalog", "", "list_experiments"},
    };
    return catalog;
}

std::string list_experiments() {
    std::ostringstream os;
    os << "experiments (stable order):\n";
    for (const auto& info : experiment_catalog()) {
        os << "  " << info.name << " - " << info.description << "\n";
        if (!info.keys.empty()) os << "      keys: " << info.keys << "\n";
        os << "      operations: " << info.operations << "\n";
    }
    os << "core operations used throughout: operator_norm_sym ks_distance "
          "integrate_halfline\n";
    os << "exit codes: 0 pass, 2 config error, 3 budget exhausted\n";
    return os.str();
}

int run_experiment(const std::string& name, const ExperimentConfig& cfg,
                   std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    Ctx ctx(cfg, "ccg-out/" + name);
    if (name != "accept") {
        Json echo;
        for (const auto& [k, v] : cfg.values()) echo[k] = v;
        ctx.writer.record(Json{{"experiment", name}, {"config_echo", echo}});
    }
    int code = exit_config_error;
    if (name == "sample") code = run_sample(ctx);
    else if (name == "shell") code = run_shell(ctx);
    else if (name == "moments") code = run_moments(ctx);
    else if (name == "weak-strong") code = run_weak_strong(ctx);
    else if (name == "cov-approx") code = run_cov_approx(ctx);
    else if (name == "clt") code = run_clt(ctx);
    else if (name == "abp") code = run_abp(ctx);
    else if (name == "isoperimetry") code = run_isoperimetry(ctx);
    else if (name == "kp-body") code = run_kp_body(ctx);
    else if (name == "sections") code = run_sections(ctx);
    else if (name == "volume") code = run_volume(ctx);
    else if (name == "hull") code = run_hull(ctx);
    else if (name == "proof-check") code = run_proof_check(ctx);
    else if (name == "accept")
        code = run_acceptance_cli(cfg, log);
    else
        throw ConfigError("unknown experiment '" + name + "'");
    const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    // runtimes go to the console only; the JSON-lines reports must be
    // byte-identical across runs
    log << name << ": exit " << code << " (" << dt << " ms), reports under "
        << ctx.writer.dir().string() << "\n";
    return code;
}

}  // namespace ccg::cli
