// lor: exact and estimated resilience of Rademacher sums, additive-basis
// construction, the low-resilience weight families and their flip
// certificates, and scaling-law sweeps.
//
// Every command emits a run record {schema, version, command, seed?,
// inputs, outputs}; `lor replay FILE` re-executes the echoed inputs and
// checks that the outputs match byte for byte.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "lor/io.hpp"
#include "lor/parallel.hpp"

namespace {

using lor::Json;

struct ExecContext {
    int threads = 0;  // execution detail; never part of the record
};

lor::SolverLimits limits_from(const Json& inputs, const ExecContext& ctx) {
    lor::SolverLimits lim;
    lim.threads = ctx.threads;
    if (inputs.contains("limit_n")) lim.exhaustive_limit = inputs["limit_n"].get<int>();
    return lim;
}

lor::WeightSequence sequence_from_inputs(const Json& inputs) {
    if (inputs.contains("weights")) {
        Json doc;
        doc["weights"] = inputs["weights"];
        if (inputs.contains("name")) doc["name"] = inputs["name"];
        if (inputs.contains("params")) doc["params"] = inputs["params"];
        return lor::weights_from_json(doc);
    }
    lor::FamilySpec spec;
    auto fam = lor::family_from_string(inputs.at("family").get<std::string>());
    if (!fam) throw lor::UsageError("unknown family: " + inputs["family"].dump());
    spec.family = *fam;
    spec.n = inputs.at("n").get<int64_t>();
    if (inputs.contains("order_k")) spec.k = inputs["order_k"].get<int>();
    if (inputs.contains("eps_num")) spec.eps_num = inputs["eps_num"].get<int64_t>();
    if (inputs.contains("eps_den")) spec.eps_den = inputs["eps_den"].get<int64_t>();
    if (inputs.contains("cheb_l")) spec.cheb_l = inputs["cheb_l"].get<int64_t>();
    return lor::generate(spec);
}

// --- runners: inputs JSON -> outputs JSON (shared by CLI and replay) ------

Json run_resilience(const Json& inputs, const ExecContext& ctx) {
    lor::WeightSequence a = sequence_from_inputs(inputs);
    lor::SignVector xi = lor::SignVector::from_string(inputs.at("signs").get<std::string>());
    lor::BigInt x = lor::bigint_from_json(inputs.at("x"));
    const std::string algo = inputs.value("algo", "auto");
    const bool want_witness = inputs.value("witness", true);
    lor::SolverLimits lim = limits_from(inputs, ctx);

    Json out;
    bool use_dp = algo == "dp";
    if (algo == "auto")
        use_dp = a.fits_int64() &&
                 a.total_abs_sum() * 2 + 1 <= lor::BigInt(lim.dp_span_entries);
    if (use_dp) {
        lor::FlipSumTable table(a, xi, lim);
        auto value = table.min_flips(x);
        out["algorithm"] = "dp";
        out["infinite"] = !value.has_value();
        if (value) {
            out["value"] = *value;
            if (want_witness) out["witness"] = table.witness(x).to_one_based();
        } else {
            out["value"] = "inf";
        }
    } else {
        int kmax = inputs.value("kmax", 8);
        auto res = lor::resilience_bounded(a, xi, x, kmax, want_witness, lim);
        out["algorithm"] = "bounded";
        out["kmax"] = kmax;
        if (res.is_value()) {
            out["value"] = res.value;
            out["exceeded"] = false;
            if (want_witness && res.witness) out["witness"] = res.witness->to_one_based();
        } else {
            out["exceeded"] = true;
        }
    }
    return out;
}

Json run_profile(const Json& inputs, const ExecContext& ctx) {
    lor::WeightSequence a = sequence_from_inputs(inputs);
    lor::BigInt x = lor::bigint_from_json(inputs.at("x"));
    lor::ProfileOptions opt;
    opt.limits = limits_from(inputs, ctx);
    if (inputs.contains("max_depth")) opt.max_depth = inputs["max_depth"].get<int>();
    return lor::profile_to_json(lor::hypercube_profile(a, x, opt));
}

Json run_qk(const Json& inputs, const ExecContext& ctx) {
    lor::WeightSequence a = sequence_from_inputs(inputs);
    int k = inputs.at("k").get<int>();
    std::optional<std::vector<lor::BigInt>> cands;
    if (inputs.contains("candidates")) {
        std::vector<lor::BigInt> v;
        for (const auto& c : inputs["candidates"]) v.push_back(lor::bigint_from_json(c));
        cands = std::move(v);
    }
    return lor::qk_to_json(lor::qk_exact(a, k, cands, limits_from(inputs, ctx)));
}

Json run_basis(const Json& inputs, const ExecContext&) {
    int order = inputs.at("order").get<int>();
    int64_t range = inputs.at("range").get<int64_t>();
    lor::AdditiveBasis b = inputs.value("optimal", false)
                               ? lor::optimal_basis_bruteforce(order, range)
                               : lor::build_basis(order, range);
    Json out = lor::basis_to_json(b);
    out["verified"] = lor::verify_basis(b.elements, b.order, b.range);
    out["meets_square_sum_bound"] = lor::meets_square_sum_bound(b);
    return out;
}

Json run_construct(const Json& inputs, const ExecContext&) {
    lor::WeightSequence a = sequence_from_inputs(inputs);
    Json out = lor::weights_to_json(a);
    out["total_sum"] = lor::bigint_to_json(a.total_sum());
    out["total_sum_of_squares"] = lor::bigint_to_json(a.total_sum_of_squares());
    return out;
}

Json run_certify(const Json& inputs, const ExecContext& ctx) {
    lor::WeightSequence a = sequence_from_inputs(inputs);
    if (inputs.contains("signs")) {
        lor::SignVector xi = lor::SignVector::from_string(inputs["signs"].get<std::string>());
        auto fam = static_cast<lor::Family>(a.params().at("family"));
        lor::CertificateOutcome res = fam == lor::Family::layered
                                          ? lor::layered_certificate(a, xi)
                                          : lor::harmonic_certificate(a, xi);
        Json out;
        out["success"] = res.success;
        out["size_bound"] = res.size_bound;
        if (res.success) {
            out["flips"] = res.certificate.flips.to_one_based();
            out["size"] = res.certificate.flips.size();
            out["achieved_target"] = lor::bigint_to_json(res.certificate.achieved_target);
        } else {
            out["failure"] = lor::cert_fail_name(res.reason);
        }
        return out;
    }
    uint64_t samples = inputs.at("samples").get<uint64_t>();
    uint64_t seed = inputs.at("seed").get<uint64_t>();
    return lor::certify_to_json(lor::certify_monte_carlo(a, samples, seed, ctx.threads));
}

Json run_estimate(const Json& inputs, const ExecContext& ctx) {
    lor::WeightSequence a = sequence_from_inputs(inputs);
    lor::BigInt x = lor::bigint_from_json(inputs.at("x"));
    int k = inputs.at("k").get<int>();
    if (inputs.value("method", "monte_carlo") == std::string("exact_exhaustive"))
        return lor::estimate_to_json(
            lor::estimate_resilience_exact(a, x, k, limits_from(inputs, ctx)));
    uint64_t samples = inputs.at("samples").get<uint64_t>();
    uint64_t seed = inputs.at("seed").get<uint64_t>();
    return lor::estimate_to_json(
        lor::estimate_resilience_prob(a, x, k, samples, seed, ctx.threads));
}

Json run_sweep(const Json& inputs, const ExecContext& ctx) {
    lor::FamilySpec spec;
    auto fam = lor::family_from_string(inputs.at("family").get<std::string>());
    if (!fam) throw lor::UsageError("unknown family: " + inputs["family"].dump());
    spec.family = *fam;
    if (inputs.contains("order_k")) spec.k = inputs["order_k"].get<int>();
    if (inputs.contains("eps_num")) spec.eps_num = inputs["eps_num"].get<int64_t>();
    if (inputs.contains("eps_den")) spec.eps_den = inputs["eps_den"].get<int64_t>();
    if (inputs.contains("cheb_l")) spec.cheb_l = inputs["cheb_l"].get<int64_t>();
    int k = inputs.at("k").get<int>();
    std::vector<int64_t> grid = inputs.at("n_grid").get<std::vector<int64_t>>();
    uint64_t samples = inputs.at("samples").get<uint64_t>();
    uint64_t seed = inputs.at("seed").get<uint64_t>();
    lor::BigInt x = inputs.contains("x") ? lor::bigint_from_json(inputs["x"]) : lor::BigInt(0);
    return lor::sweep_to_json(lor::sweep(spec, k, grid, samples, seed, x, ctx.threads));
}

Json run_bestats(const Json& inputs, const ExecContext& ctx) {
    lor::WeightSequence a = sequence_from_inputs(inputs);
    if (inputs.value("mode", "exhaustive") == std::string("exhaustive"))
        return lor::bestats_to_json(
            lor::berry_esseen_check_exhaustive(a, limits_from(inputs, ctx)));
    uint64_t samples = inputs.at("samples").get<uint64_t>();
    uint64_t seed = inputs.at("seed").get<uint64_t>();
    return lor::bestats_to_json(
        lor::berry_esseen_check_monte_carlo(a, samples, seed, ctx.threads));
}

Json run_atom(const Json& inputs, const ExecContext& ctx) {
    lor::WeightSequence a = sequence_from_inputs(inputs);
    lor::AtomProbability r =
        inputs.value("mode", "exhaustive") == std::string("exhaustive")
            ? lor::max_atom_probability_exhaustive(a, limits_from(inputs, ctx))
            : lor::max_atom_probability_monte_carlo(a, inputs.at("samples").get<uint64_t>(),
                                                    inputs.at("seed").get<uint64_t>(),
                                                    ctx.threads);
    Json out;
    out["value_num"] = lor::bigint_to_json(boost::multiprecision::numerator(r.value));
    out["value_den"] = lor::bigint_to_json(boost::multiprecision::denominator(r.value));
    out["value"] = static_cast<double>(r.value);
    out["count"] = r.count;
    out["argmax_x"] = lor::bigint_to_json(r.argmax_x);
    out["method"] = lor::stat_method_name(r.method);
    return out;
}

using Runner = std::function<Json(const Json&, const ExecContext&)>;

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> r = {
        {"resilience", run_resilience}, {"profile", run_profile},
        {"qk", run_qk},                 {"basis", run_basis},
        {"construct", run_construct},   {"certify", run_certify},
        {"estimate", run_estimate},     {"sweep", run_sweep},
        {"bestats", run_bestats},       {"atom", run_atom},
    };
    return r;
}

// --- record emission --------------------------------------------------------

struct OutputOptions {
    std::string format = "json";
    std::string out_path;
};

void emit_record(const std::string& command, const Json& inputs, const Json& outputs,
                 std::optional<uint64_t> seed, const OutputOptions& opts) {
    Json record = lor::make_run_record(command, inputs, outputs, seed);
    std::string payload = opts.format == "csv" ? lor::to_csv(command, outputs)
                                               : lor::record_to_string(record);
    if (!opts.out_path.empty()) {
        std::ofstream f(opts.out_path, std::ios::binary);
        if (!f) throw lor::UsageError("cannot write: " + opts.out_path);
        f << (opts.format == "csv" ? payload : lor::record_to_string(record));
        std::cout << "wrote " << opts.out_path << "\n";
    } else {
        std::cout << payload;
    }
}

// Weights/x come in as text (possibly rationals); both are scaled by the
// same factor, which the record echoes.
void attach_weights_inputs(Json& inputs, const lor::ParsedWeights& pw,
                           const std::string& x_text) {
    Json arr = Json::array();
    for (const auto& w : pw.sequence.weights()) arr.push_back(lor::bigint_to_json(w));
    inputs["weights"] = std::move(arr);
    inputs["scale"] = lor::bigint_to_json(pw.scale);
    if (!x_text.empty()) {
        auto slash = x_text.find('/');
        lor::BigInt num(slash == std::string::npos ? x_text : x_text.substr(0, slash));
        lor::BigInt den(slash == std::string::npos ? std::string("1")
                                                   : x_text.substr(slash + 1));
        if (den == 0) throw lor::ParseError("x has zero denominator");
        lor::BigInt scaled_num = num * pw.scale;
        if (scaled_num % den != 0)
            // Not on the lattice of achievable values; any integer off the
            // support gives the same (infinite) answers downstream.
            throw lor::UsageError("x = " + x_text +
                                  " is not an integer after scaling by " + pw.scale.str() +
                                  "; the target is unachievable by an integer sequence");
        inputs["x"] = lor::bigint_to_json(scaled_num / den);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Littlewood-Offord resilience toolkit"};
    app.require_subcommand(1);

    ExecContext ctx;
    OutputOptions out_opts;
    app.add_option("--threads", ctx.threads, "worker thread cap (default: LOR_THREADS or all cores)");

    // Per-command option storage.
    struct {
        std::string weights_inline, weights_file, signs, x{"0"}, algo{"auto"};
        std::string family, mode{"exhaustive"}, n_grid, method{"monte_carlo"};
        std::string candidates;
        int64_t n = 0, cheb_l = 20;
        int k = 0, order_k = 0, order = 1, kmax = 8, limit_n = 0, max_depth = -1;
        int64_t range = 1;
        std::string epsilon{"1/10"};
        uint64_t samples = 0, seed = 0;
        bool optimal = false, no_witness = false;
        std::string replay_path;
    } o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", out_opts.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", out_opts.out_path, "write the run record to FILE");
        cmd->add_option("--threads", ctx.threads, "worker thread cap");
    };
    auto add_weights = [&](CLI::App* cmd, bool with_family) {
        cmd->add_option("-w,--weights", o.weights_inline,
                        "inline weights (integers or p/q rationals)");
        cmd->add_option("--weights-file", o.weights_file, "weights file (text or JSON)");
        if (with_family) {
            cmd->add_option("--family", o.family, "generate this family instead");
            cmd->add_option("--n", o.n, "family length");
            cmd->add_option("--order-k", o.order_k, "basis order (pk_lower)");
            cmd->add_option("--epsilon", o.epsilon, "epsilon as p/q in (0,1)");
            cmd->add_option("--cheb-l", o.cheb_l, "concentration gate multiplier");
        }
    };

    auto* c_res = app.add_subcommand("resilience", "exact R_x(xi) for one sign vector");
    add_weights(c_res, false);
    c_res->add_option("--signs", o.signs, "sign vector over {+,-}")->required();
    c_res->add_option("--x", o.x, "target value (integer or p/q)")->required();
    c_res->add_option("--algo", o.algo, "dp, bounded or auto")
        ->check(CLI::IsMember({"auto", "dp", "bounded"}));
    c_res->add_option("--kmax", o.kmax, "depth cap for the bounded search");
    c_res->add_flag("--no-witness", o.no_witness, "skip witness extraction");
    add_common(c_res);

    auto* c_prof = app.add_subcommand("profile", "exact distribution of R_x over all sign vectors");
    add_weights(c_prof, true);
    c_prof->add_option("--x", o.x, "target value")->required();
    c_prof->add_option("--limit-n", o.limit_n, "exhaustive limit override");
    c_prof->add_option("--max-depth", o.max_depth, "stop the distance sweep at this depth");
    add_common(c_prof);

    auto* c_qk = app.add_subcommand("qk", "exact q_k(a) = max_x Pr[R_x <= k]");
    add_weights(c_qk, true);
    c_qk->add_option("--k", o.k, "resilience level")->required();
    c_qk->add_option("--candidates", o.candidates, "comma list of targets (default: support)");
    c_qk->add_option("--limit-n", o.limit_n, "exhaustive limit override");
    add_common(c_qk);

    auto* c_basis = app.add_subcommand("basis", "order-h additive basis of [n]");
    c_basis->add_option("--order", o.order, "basis order h")->required();
    c_basis->add_option("--range", o.range, "range n")->required();
    c_basis->add_flag("--optimal", o.optimal, "exact brute-force optimum (n <= 24)");
    add_common(c_basis);

    auto* c_con = app.add_subcommand("construct", "generate a weight-sequence family");
    c_con->add_option("--family", o.family, "family name")->required();
    c_con->add_option("--n", o.n, "length")->required();
    c_con->add_option("--order-k", o.order_k, "basis order (pk_lower)");
    c_con->add_option("--epsilon", o.epsilon, "epsilon as p/q");
    c_con->add_option("--cheb-l", o.cheb_l, "concentration gate multiplier");
    add_common(c_con);

    auto* c_cert = app.add_subcommand("certify", "flip certificates for layered/janson_spencer");
    c_cert->add_option("--family", o.family, "layered or janson_spencer")->required();
    c_cert->add_option("--n", o.n, "length")->required();
    c_cert->add_option("--epsilon", o.epsilon, "epsilon as p/q");
    c_cert->add_option("--cheb-l", o.cheb_l, "concentration gate multiplier");
    c_cert->add_option("--signs", o.signs, "certify one explicit sign vector");
    c_cert->add_option("--samples", o.samples, "Monte Carlo sample count");
    c_cert->add_option("--seed", o.seed, "RNG seed (required with --samples)");
    add_common(c_cert);

    auto* c_est = app.add_subcommand("estimate", "Pr[R_x <= k] by seeded sampling or exactly");
    add_weights(c_est, true);
    c_est->add_option("--x", o.x, "target value")->required();
    c_est->add_option("--k", o.k, "resilience level")->required();
    c_est->add_option("--method", o.method, "monte_carlo or exact_exhaustive")
        ->check(CLI::IsMember({"monte_carlo", "exact_exhaustive"}));
    c_est->add_option("--samples", o.samples, "sample count");
    c_est->add_option("--seed", o.seed, "RNG seed");
    c_est->add_option("--limit-n", o.limit_n, "exhaustive limit override");
    add_common(c_est);

    auto* c_sweep = app.add_subcommand("sweep", "estimate Pr[R_x <= k] over an n-grid and fit a slope");
    c_sweep->add_option("--family", o.family, "family name")->required();
    c_sweep->add_option("--k", o.k, "resilience level")->required();
    c_sweep->add_option("--n-grid", o.n_grid, "start:end:xF | start:end:+d | a,b,c")->required();
    c_sweep->add_option("--samples", o.samples, "samples per grid point")->required();
    c_sweep->add_option("--seed", o.seed, "RNG seed")->required();
    c_sweep->add_option("--x", o.x, "target value (default 0)");
    c_sweep->add_option("--order-k", o.order_k, "basis order (pk_lower)");
    c_sweep->add_option("--epsilon", o.epsilon, "epsilon as p/q");
    c_sweep->add_option("--cheb-l", o.cheb_l, "concentration gate multiplier");
    add_common(c_sweep);

    auto* c_be = app.add_subcommand("bestats", "sigma, rho and Kolmogorov distance to the normal");
    add_weights(c_be, true);
    c_be->add_option("--mode", o.mode, "exhaustive or monte_carlo")
        ->check(CLI::IsMember({"exhaustive", "monte_carlo"}));
    c_be->add_option("--samples", o.samples, "sample count (monte_carlo)");
    c_be->add_option("--seed", o.seed, "RNG seed (monte_carlo)");
    c_be->add_option("--limit-n", o.limit_n, "exhaustive limit override");
    add_common(c_be);

    auto* c_atom = app.add_subcommand("atom", "max_x Pr[X = x]");
    add_weights(c_atom, true);
    c_atom->add_option("--mode", o.mode, "exhaustive or monte_carlo")
        ->check(CLI::IsMember({"exhaustive", "monte_carlo"}));
    c_atom->add_option("--samples", o.samples, "sample count (monte_carlo)");
    c_atom->add_option("--seed", o.seed, "RNG seed (monte_carlo)");
    c_atom->add_option("--limit-n", o.limit_n, "exhaustive limit override");
    add_common(c_atom);

    auto* c_replay = app.add_subcommand("replay", "re-execute a run record and compare outputs");
    c_replay->add_option("file", o.replay_path, "run record JSON")->required();
    c_replay->add_option("--threads", ctx.threads, "worker thread cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string command = sub->get_name();

        if (command == "replay") {
            std::ifstream f(o.replay_path);
            if (!f) throw lor::UsageError("cannot open record: " + o.replay_path);
            Json record = Json::parse(f);
            const std::string cmd = record.at("command").get<std::string>();
            auto it = runners().find(cmd);
            if (it == runners().end()) throw lor::UsageError("record has unknown command " + cmd);
            Json fresh = it->second(record.at("inputs"), ctx);
            if (fresh == record.at("outputs")) {
                std::cout << "replay ok: outputs identical\n";
                return 0;
            }
            std::cout << "replay MISMATCH\nrecorded: " << record["outputs"].dump(2)
                      << "\nfresh:    " << fresh.dump(2) << "\n";
            return 1;
        }

        // Assemble the canonical inputs echo for the chosen command.
        Json inputs = Json::object();
        std::optional<uint64_t> seed;
        auto parse_epsilon = [&](Json& in) {
            auto slash = o.epsilon.find('/');
            if (slash == std::string::npos)
                throw lor::ParseError("epsilon must be written p/q");
            in["eps_num"] = std::stoll(o.epsilon.substr(0, slash));
            in["eps_den"] = std::stoll(o.epsilon.substr(slash + 1));
        };
        auto attach_source = [&](bool with_family, bool want_x) {
            const std::string x_text = want_x ? o.x : std::string{};
            if (!o.weights_inline.empty())
                attach_weights_inputs(inputs, lor::parse_weights_text(o.weights_inline), x_text);
            else if (!o.weights_file.empty())
                attach_weights_inputs(inputs, lor::parse_weights_file(o.weights_file), x_text);
            else if (with_family && !o.family.empty()) {
                inputs["family"] = o.family;
                inputs["n"] = o.n;
                if (o.order_k > 0) inputs["order_k"] = o.order_k;
                parse_epsilon(inputs);
                inputs["cheb_l"] = o.cheb_l;
                if (want_x) {
                    if (o.x.find('/') != std::string::npos)
                        throw lor::UsageError("family targets must be integers");
                    inputs["x"] = lor::bigint_to_json(lor::BigInt(o.x));
                }
            } else {
                throw lor::UsageError("provide --weights, --weights-file or --family/--n");
            }
        };

        if (command == "resilience") {
            attach_source(false, true);
            inputs["signs"] = o.signs;
            inputs["algo"] = o.algo;
            if (o.algo == "bounded") inputs["kmax"] = o.kmax;
            inputs["witness"] = !o.no_witness;
        } else if (command == "profile") {
            attach_source(true, true);
            if (o.limit_n > 0) inputs["limit_n"] = o.limit_n;
            if (o.max_depth >= 0) inputs["max_depth"] = o.max_depth;
        } else if (command == "qk") {
            attach_source(true, false);
            inputs["k"] = o.k;
            if (o.limit_n > 0) inputs["limit_n"] = o.limit_n;
            if (!o.candidates.empty()) {
                Json arr = Json::array();
                std::istringstream in(o.candidates);
                std::string tok;
                while (std::getline(in, tok, ','))
                    arr.push_back(lor::bigint_to_json(lor::BigInt(tok)));
                inputs["candidates"] = std::move(arr);
            }
        } else if (command == "basis") {
            inputs["order"] = o.order;
            inputs["range"] = o.range;
            inputs["optimal"] = o.optimal;
        } else if (command == "construct") {
            inputs["family"] = o.family;
            inputs["n"] = o.n;
            if (o.order_k > 0) inputs["order_k"] = o.order_k;
            parse_epsilon(inputs);
            inputs["cheb_l"] = o.cheb_l;
        } else if (command == "certify") {
            inputs["family"] = o.family;
            inputs["n"] = o.n;
            parse_epsilon(inputs);
            inputs["cheb_l"] = o.cheb_l;
            if (!o.signs.empty()) {
                inputs["signs"] = o.signs;
            } else {
                if (o.samples == 0)
                    throw lor::UsageError("certify needs --signs or --samples with --seed");
                if (!c_cert->count("--seed"))
                    throw lor::UsageError("randomized runs require an explicit --seed");
                inputs["samples"] = o.samples;
                inputs["seed"] = o.seed;
                seed = o.seed;
            }
        } else if (command == "estimate") {
            attach_source(true, true);
            inputs["k"] = o.k;
            inputs["method"] = o.method;
            if (o.limit_n > 0) inputs["limit_n"] = o.limit_n;
            if (o.method == "monte_carlo") {
                if (o.samples == 0) throw lor::UsageError("estimate needs --samples");
                if (!c_est->count("--seed"))
                    throw lor::UsageError("randomized runs require an explicit --seed");
                inputs["samples"] = o.samples;
                inputs["seed"] = o.seed;
                seed = o.seed;
            }
        } else if (command == "sweep") {
            inputs["family"] = o.family;
            if (o.order_k > 0) inputs["order_k"] = o.order_k;
            parse_epsilon(inputs);
            inputs["cheb_l"] = o.cheb_l;
            inputs["k"] = o.k;
            inputs["n_grid"] = lor::parse_n_grid(o.n_grid);
            inputs["samples"] = o.samples;
            inputs["seed"] = o.seed;
            if (o.x.find('/') != std::string::npos)
                throw lor::UsageError("sweep targets must be integers");
            inputs["x"] = lor::bigint_to_json(lor::BigInt(o.x));
            seed = o.seed;
        } else if (command == "bestats" || command == "atom") {
            attach_source(true, false);
            inputs["mode"] = o.mode == "monte_carlo" ? "monte_carlo" : "exhaustive";
            if (o.limit_n > 0) inputs["limit_n"] = o.limit_n;
            if (o.mode == "monte_carlo") {
                if (o.samples == 0) throw lor::UsageError("monte_carlo mode needs --samples");
                if (!sub->count("--seed"))
                    throw lor::UsageError("randomized runs require an explicit --seed");
                inputs["samples"] = o.samples;
                inputs["seed"] = o.seed;
                seed = o.seed;
            }
        }

        Json outputs = runners().at(command)(inputs, ctx);
        emit_record(command, inputs, outputs, seed, out_opts);
        return 0;
    } catch (const lor::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lor::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const lor::ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
