// Command-line front end: ber / design / simulate / complexity / codebooks.
// Every run is reproducible from a JSON config (CLI flags override config
// values); output is locale-free CSV with 17-significant-digit doubles.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ocdma/ocdma.hpp"

namespace {

using nlohmann::json;

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        const auto colon2 = text.find(':', colon + 1);
        const std::int64_t a = std::stoll(text.substr(0, colon));
        const std::int64_t b = std::stoll(
            text.substr(colon + 1, colon2 == std::string::npos ? std::string::npos
                                                               : colon2 - colon - 1));
        const std::int64_t s = colon2 == std::string::npos ? 1 : std::stoll(text.substr(colon2 + 1));
        if (s < 1) throw CLI::ValidationError("range step must be positive: " + text);
        for (std::int64_t v = a; v <= b; v += s) out.push_back(v);
        return out;
    }
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoll(tok));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

void fail(int code, const std::string& kind, const std::string& detail) {
    json err;
    err["error"] = kind;
    err["detail"] = detail;
    std::cerr << err.dump() << "\n";
    std::exit(code);
}

// Pull defaults for unset options out of the JSON config; reject keys that
// do not correspond to an option of the invoked command.
void apply_config(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(1, "config", "cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        fail(1, "config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(1, "config", "config root must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != cmd.get_name())
                fail(1, "config", "config command does not match invoked command");
            continue;
        }
        CLI::Option* opt = nullptr;
        try {
            opt = cmd.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            fail(1, "config", "unknown config key: " + key);
        }
        if (opt->count() > 0) continue;  // explicit flag wins
        std::string text;
        if (value.is_string())
            text = value.get<std::string>();
        else if (value.is_array()) {
            for (const auto& item : value) {
                if (!text.empty()) text += ",";
                text += item.is_string() ? item.get<std::string>() : item.dump();
            }
        } else
            text = value.dump();
        try {
            opt->add_result(text);
            opt->run_callback();
        } catch (const std::exception& e) {
            fail(1, "config", "bad value for key " + key + ": " + e.what());
        }
    }
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) fail(1, "io", "cannot open output file: " + path);
    return file;
}

struct CommonFlags {
    std::string config;
    std::string out;
    std::uint64_t seed = 42;
    int precision = 80;
    unsigned threads = 0;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config, "JSON config with defaults for this command");
        cmd.add_option("--out", out, "output CSV path (default: stdout)");
        cmd.add_option("--seed", seed, "PRNG seed");
        cmd.add_option("--precision", precision, "decimal digits for the exact engines");
        cmd.add_option("--threads", threads, "worker threads (0 = hardware)");
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-class optical-CDMA error analysis, code design and adaptive allocation"};
    app.require_subcommand(1);

    // --- ber ---------------------------------------------------------------
    auto* ber = app.add_subcommand("ber", "exact vs approximate error rate over a user sweep");
    CommonFlags ber_common;
    ber_common.attach(*ber);
    std::int64_t ber_M = 1, ber_L = 1, ber_W = 1, ber_lambda = 1, ber_nmin = 1, ber_nmax = 1;
    ber->add_option("--M", ber_M, "wavelength count");
    ber->add_option("--L", ber_L, "code length (chips)")->required();
    ber->add_option("--W", ber_W, "code weight (pulses)")->required();
    ber->add_option("--lambda", ber_lambda, "maximum cross-correlation")->required();
    ber->add_option("--n-min", ber_nmin, "first user count");
    ber->add_option("--n-max", ber_nmax, "last user count")->required();

    // --- design ------------------------------------------------------------
    auto* design = app.add_subcommand("design", "rate- or power-optimized code design sweep");
    CommonFlags design_common;
    design_common.attach(*design);
    std::string design_N = "60", design_pe = "1e-7", design_method = "brute";
    std::int64_t design_M = 1, design_L = 0;
    ocdma::SearchBounds design_bounds;
    design->add_option("--N", design_N, "user counts: list a,b,c or range a:b:s");
    design->add_option("--M", design_M, "wavelength count");
    design->add_option("--pe-th", design_pe, "error thresholds, comma separated");
    design->add_option("--method", design_method, "brute | heuristic | power");
    design->add_option("--L", design_L, "fixed code length (power mode)");
    design->add_option("--l-max", design_bounds.L_max, "length bound for the box search");
    design->add_option("--w-max", design_bounds.W_max, "weight bound");
    design->add_option("--lambda-max", design_bounds.lambda_max, "correlation bound");

    // --- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "adaptive reallocation gains, or an event-trace replay");
    CommonFlags sim_common;
    sim_common.attach(*sim);
    std::string sim_mode = "rate", sim_pe = "1e-7", sim_pact = "0.5", sim_method = "heuristic";
    std::string sim_events;
    std::int64_t sim_N = 60, sim_M = 1, sim_intervals = 100000;
    double sim_T = 1.0;
    ocdma::SearchBounds sim_bounds;
    sim->add_option("--mode", sim_mode, "rate | power");
    sim->add_option("--N", sim_N, "maximum active users");
    sim->add_option("--M", sim_M, "wavelength count");
    sim->add_option("--pe-th", sim_pe, "error thresholds, comma separated");
    sim->add_option("--p-active", sim_pact, "activity probabilities, comma separated");
    sim->add_option("--intervals", sim_intervals, "Monte-Carlo intervals (or ticks with --events)");
    sim->add_option("--method", sim_method, "offline design method: heuristic | brute");
    sim->add_option("--events", sim_events, "activity trace CSV: time,user_id,activate|deactivate");
    sim->add_option("--T", sim_T, "reallocation period for the event-trace replay");
    sim->add_option("--l-max", sim_bounds.L_max, "length bound for brute offline designs");
    sim->add_option("--w-max", sim_bounds.W_max, "weight bound");
    sim->add_option("--lambda-max", sim_bounds.lambda_max, "correlation bound");

    // --- complexity ----------------------------------------------------------
    auto* cplx = app.add_subcommand("complexity", "brute-to-heuristic candidate-evaluation ratio");
    CommonFlags cplx_common;
    cplx_common.attach(*cplx);
    std::int64_t cplx_N = 60, cplx_M = 1;
    double cplx_pe = 1e-7;
    ocdma::SearchBounds cplx_bounds;
    cplx->add_option("--N", cplx_N, "user count");
    cplx->add_option("--M", cplx_M, "wavelength count");
    cplx->add_option("--pe-th", cplx_pe, "error threshold");
    cplx->add_option("--l-max", cplx_bounds.L_max, "length bound");
    cplx->add_option("--w-max", cplx_bounds.W_max, "weight bound");
    cplx->add_option("--lambda-max", cplx_bounds.lambda_max, "correlation bound");

    // --- codebooks -----------------------------------------------------------
    auto* books = app.add_subcommand("codebooks", "offline per-load codebook table");
    CommonFlags books_common;
    books_common.attach(*books);
    std::string books_mode = "rate", books_method = "heuristic";
    std::int64_t books_N = 60, books_M = 1;
    double books_pe = 1e-7;
    ocdma::SearchBounds books_bounds;
    books->add_option("--mode", books_mode, "rate | power");
    books->add_option("--N", books_N, "maximum active users");
    books->add_option("--M", books_M, "wavelength count");
    books->add_option("--pe-th", books_pe, "error threshold");
    books->add_option("--method", books_method, "heuristic | brute");
    books->add_option("--l-max", books_bounds.L_max, "length bound");
    books->add_option("--w-max", books_bounds.W_max, "weight bound");
    books->add_option("--lambda-max", books_bounds.lambda_max, "correlation bound");

    CLI11_PARSE(app, argc, argv);

    CLI::App* active = app.get_subcommands().front();
    CommonFlags* common = nullptr;
    if (active == ber) common = &ber_common;
    if (active == design) common = &design_common;
    if (active == sim) common = &sim_common;
    if (active == cplx) common = &cplx_common;
    if (active == books) common = &books_common;
    if (!common->config.empty()) {
        apply_config(*active, common->config);
    }

    const auto method_of = [](const std::string& name) {
        if (name == "heuristic") return ocdma::DesignMethod::heuristic;
        if (name == "brute") return ocdma::DesignMethod::brute;
        throw CLI::ValidationError("unknown design method: " + name);
    };
    const auto mode_of = [](const std::string& name) {
        if (name == "rate") return ocdma::AllocationMode::rate;
        if (name == "power") return ocdma::AllocationMode::power;
        throw CLI::ValidationError("unknown allocation mode: " + name);
    };

    std::ofstream out_file;
    try {
        if (active == ber) {
            ocdma::BerSweepArgs args;
            args.code = {ber_M, ber_L, ber_W, ber_lambda};
            args.n_min = ber_nmin;
            args.n_max = ber_nmax;
            args.digits = ber_common.precision;
            const auto rows = ocdma::cmd_ber(args);
            auto& os = open_output(ber_common.out, out_file);
            os << "N,exact,approx\n";
            for (const auto& r : rows)
                os << r.N << "," << ocdma::format_sig17(r.exact_v) << ","
                   << ocdma::format_sig17(r.approx_v) << "\n";
        } else if (active == design) {
            ocdma::DesignSweepArgs args;
            args.Ns = parse_int_list(design_N);
            args.pe_ths = parse_double_list(design_pe);
            args.M = design_M;
            args.method = design_method;
            args.L = design_L;
            args.bounds = design_bounds;
            args.digits = design_common.precision;
            args.threads = design_common.threads;
            const auto rows = ocdma::cmd_design(args);
            auto& os = open_output(design_common.out, out_file);
            os << "N,pe_th,L,W,lambda,eval_count,method\n";
            json infeasible = json::array();
            for (const auto& r : rows) {
                if (!r.feasible) {
                    infeasible.push_back({{"N", r.N}, {"pe_th", r.pe_th}});
                    continue;
                }
                os << r.N << "," << ocdma::format_sig17(r.pe_th) << "," << r.L << "," << r.W
                   << "," << r.lambda << "," << r.eval_count << "," << r.method << "\n";
            }
            if (!infeasible.empty()) {
                json err;
                err["error"] = "infeasible";
                err["detail"] = "no feasible design inside the bounds for some sweep points";
                err["points"] = infeasible;
                std::cerr << err.dump() << "\n";
                return 2;
            }
        } else if (active == sim) {
            if (!sim_events.empty()) {
                // message-driven replay
                const auto mode = mode_of(sim_mode);
                const auto pes = parse_double_list(sim_pe);
                if (pes.size() != 1)
                    throw CLI::ValidationError("event-trace replay expects one --pe-th value");
                std::ifstream ev_in(sim_events);
                if (!ev_in) fail(1, "io", "cannot open event trace: " + sim_events);
                const auto events = ocdma::parse_event_trace(ev_in);
                const auto table =
                    ocdma::build_codebooks(mode, sim_N, sim_M, pes[0], method_of(sim_method),
                                           sim_bounds, sim_common.precision, sim_common.threads);
                ocdma::SimConfig cfg;
                cfg.N = sim_N;
                cfg.M = sim_M;
                cfg.pe_th = pes[0];
                cfg.p_active = 0.5;  // unused by the replay
                cfg.intervals = sim_intervals;
                cfg.seed = sim_common.seed;
                cfg.T = sim_T;
                cfg.mode = mode;
                const auto records = ocdma::run_message_simulation(cfg, table, events);
                auto& os = open_output(sim_common.out, out_file);
                os << "time,n,L,W,lambda\n";
                for (const auto& r : records)
                    os << ocdma::format_sig17(r.time) << "," << r.n << "," << r.book.L << ","
                       << r.book.W << "," << r.book.lambda << "\n";
            } else {
                ocdma::SimulateSweepArgs args;
                args.mode = mode_of(sim_mode);
                args.N = sim_N;
                args.M = sim_M;
                args.pe_ths = parse_double_list(sim_pe);
                args.p_actives = parse_double_list(sim_pact);
                args.intervals = sim_intervals;
                args.seed = sim_common.seed;
                args.method = method_of(sim_method);
                args.bounds = sim_bounds;
                args.digits = sim_common.precision;
                args.threads = sim_common.threads;
                const auto rows = ocdma::cmd_simulate(args);
                auto& os = open_output(sim_common.out, out_file);
                os << "p_active,pe_th,gain,stderr,variant\n";
                for (const auto& r : rows)
                    os << ocdma::format_sig17(r.p_active) << "," << ocdma::format_sig17(r.pe_th)
                       << "," << ocdma::format_sig17(r.gain) << ","
                       << ocdma::format_sig17(r.stderr_) << "," << r.variant << "\n";
            }
        } else if (active == cplx) {
            const double gain = ocdma::complexity_gain(cplx_N, cplx_M, cplx_pe, cplx_bounds,
                                                       cplx_common.precision,
                                                       cplx_common.threads);
            std::cout << ocdma::format_sig17(gain) << "\n";
        } else if (active == books) {
            const auto table = ocdma::build_codebooks(
                mode_of(books_mode), books_N, books_M, books_pe, method_of(books_method),
                books_bounds, books_common.precision, books_common.threads);
            auto& os = open_output(books_common.out, out_file);
            os << "n,L,W,lambda\n";
            for (const auto& r : ocdma::codebook_rows(table))
                os << r.n << "," << r.L << "," << r.W << "," << r.lambda << "\n";
        }
    } catch (const CLI::ValidationError& e) {
        fail(1, "usage", e.what());
    } catch (const std::invalid_argument& e) {
        fail(1, "validation", e.what());
    } catch (const std::domain_error& e) {
        fail(2, "infeasible", e.what());
    } catch (const std::runtime_error& e) {
        fail(2, "runtime", e.what());
    }
    return 0;
}
