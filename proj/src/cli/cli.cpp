#include "mlefit/cli.hpp"

#include "mlefit/distributions.hpp"
#include "mlefit/errors.hpp"
#include "mlefit/estimators.hpp"
#include "mlefit/sampling.hpp"
#include "mlefit/special_fn.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace mlefit::cli {

namespace {

constexpr const char* kSeedEnv = "MLEFIT_SEED";
constexpr int kSampleDigits = 17;
constexpr int kEvalDigits = 15;

/// Thrown for user errors detected after flag parsing; maps to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> seed_from_env() {
    const char* text = std::getenv(kSeedEnv);
    if (text == nullptr || *text == '\0') {
        return std::nullopt;
    }
    const std::string_view view(text);
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
    if (ec != std::errc{} || end != view.data() + view.size()) {
        throw UsageError(std::string(kSeedEnv) + " must be an unsigned 64-bit integer");
    }
    return value;
}

/// Resolves the output stream: stdout when `path` is empty or "-".
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw UsageError("cannot open output file '" + path + "'");
            }
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

PsiMode parse_psi_mode(const std::string& text) {
    return text == "truncated" ? PsiMode::PaperTruncated : PsiMode::Accurate;
}

VarianceDivisor parse_divisor(const std::string& text) {
    return text == "n" ? VarianceDivisor::N : VarianceDivisor::NMinusOne;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
    std::string dist;
    double alpha = 0.0;
    std::optional<double> delta;
    std::optional<double> beta;
    long long n = 0;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_sample(const SampleArgs& args, std::ostream& out) {
    if (args.n < 1) {
        throw UsageError("n must be at least 1");
    }
    std::optional<std::uint64_t> seed = args.seed;
    if (!seed) {
        seed = seed_from_env();
    }
    RngStream rng = seed ? RngStream(*seed) : RngStream::from_entropy();
    std::vector<double> values(static_cast<std::size_t>(args.n));
    if (args.dist == "ml") {
        if (!args.delta) {
            throw UsageError("--dist ml requires --delta");
        }
        sample_ml(rng, MLParams(args.alpha, *args.delta), values);
    } else {
        if (!args.beta) {
            throw UsageError("--dist gml requires --beta");
        }
        sample_gml(rng, GMLParams(args.alpha, *args.beta), values);
    }
    OutputTarget target(args.out, out);
    std::string text;
    for (double v : values) {
        text += format_number(v, kSampleDigits);
        text += '\n';
    }
    target.get() << text;
    target.get().flush();
    return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string dist;
    std::string method;
    std::string input;
    std::optional<double> ci_level;
    std::string psi_mode = "accurate";
    std::string divisor = "n-1";
};

/// One positive datum per line; blank lines are skipped. A leading Unicode
/// minus sign is read as '-', so such data are rejected as non-positive
/// rather than as unparsable.
std::vector<double> read_data(std::istream& in) {
    std::vector<double> data;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) {
            continue;
        }
        text = text.substr(first, text.find_last_not_of(" \t\r") - first + 1);
        std::string normalized(text);
        if (normalized.rfind("\xE2\x88\x92", 0) == 0) {
            normalized.replace(0, 3, "-");
        }
        if (!normalized.empty() && normalized[0] == '+') {
            normalized.erase(0, 1);
        }
        double value = 0.0;
        const char* begin = normalized.data();
        const char* end = begin + normalized.size();
        const auto [stop, ec] = std::from_chars(begin, end, value);
        const std::string where = "line " + std::to_string(line) + ": ";
        if (ec != std::errc{} || stop != end) {
            throw UsageError(where + "not a number: '" + std::string(text) + "'");
        }
        if (!std::isfinite(value)) {
            throw UsageError(where + "datum must be finite");
        }
        if (value <= 0.0) {
            throw UsageError(where + "datum must be positive");
        }
        data.push_back(value);
    }
    if (data.size() < 2) {
        throw UsageError("fit needs at least two data values");
    }
    return data;
}

nlohmann::ordered_json json_number(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

int cmd_fit(const FitArgs& args, std::istream& in, std::ostream& out, std::ostream& err) {
    const bool is_ml = args.dist == "ml";
    const Method method = args.method == "log" ? Method::LogMoment : Method::FractionalMoment;
    if (args.ci_level) {
        if (!is_ml) {
            throw UsageError("confidence intervals are only available for --dist ml");
        }
        if (method != Method::LogMoment) {
            throw UsageError("confidence intervals are only available for --method log");
        }
        if (!(*args.ci_level > 0.0 && *args.ci_level < 1.0)) {
            throw UsageError("ci-level must satisfy 0 < level < 1");
        }
    }

    std::vector<double> data;
    if (args.input.empty() || args.input == "-") {
        data = read_data(in);
    } else {
        std::ifstream file(args.input);
        if (!file) {
            throw UsageError("cannot open input file '" + args.input + "'");
        }
        data = read_data(file);
    }

    nlohmann::ordered_json result;
    result["method"] = std::string(to_string(method));
    FitResult fit{};
    try {
        const LogSample sample(data);
        const VarianceDivisor divisor = parse_divisor(args.divisor);
        if (is_ml) {
            fit = method == Method::LogMoment ? estimate_ml_logmoment(log_summary(sample, divisor))
                                              : estimate_ml_fractional(sample);
        } else {
            fit = method == Method::LogMoment
                      ? estimate_gml_logmoment(log_summary(sample, divisor),
                                               parse_psi_mode(args.psi_mode))
                      : estimate_gml_fractional(sample);
        }
    } catch (const ConvergenceError& e) {
        nlohmann::ordered_json partial;
        partial["alpha"] = nullptr;
        partial["second_param"] = nullptr;
        partial["method"] = std::string(to_string(method));
        partial["clamped"] = false;
        partial["converged"] = false;
        partial["error"] = e.what();
        out << partial.dump(2) << '\n';
        err << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    }

    nlohmann::ordered_json json;
    json["alpha"] = json_number(fit.param1);
    json["second_param"] = json_number(fit.param2);
    json["method"] = std::string(to_string(method));
    json["clamped"] = fit.clamped;
    json["converged"] = fit.converged;
    if (fit.clamped) {
        json["raw_alpha"] = json_number(fit.raw_param1);
    }
    if (args.ci_level) {
        const MLConfidenceIntervals ci = ml_confidence_intervals(fit, data.size(), *args.ci_level);
        json["ci"] = {
            {"alpha", {json_number(ci.alpha.lower), json_number(ci.alpha.upper)}},
            {"delta", {json_number(ci.delta.lower), json_number(ci.delta.upper)}},
        };
    }
    out << json.dump(2) << '\n';
    if (!fit.converged) {
        err << "error: solver did not converge\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- mc

struct McArgs {
    std::string table;
    std::string config_path;
    std::optional<std::size_t> replicates;
    bool quick = false;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::string format = "csv";
    std::string out;
    bool plot_data = false;
    std::optional<std::string> divisor;
    std::optional<std::string> psi_mode;
};

int cmd_mc(const McArgs& args, std::ostream& out) {
    ExperimentConfig config;
    std::optional<std::uint64_t> file_seed;
    bool file_replicates = false;
    if (args.table == "custom") {
        if (args.config_path.empty()) {
            throw UsageError("--table custom requires --config");
        }
        std::ifstream file(args.config_path);
        if (!file) {
            throw UsageError("cannot open config file '" + args.config_path + "'");
        }
        ParsedExperiment parsed = parse_experiment(file);
        config = std::move(parsed.config);
        file_seed = parsed.seed;
        file_replicates = parsed.replicates_given;
    } else {
        if (!args.config_path.empty()) {
            throw UsageError("--config is only used with --table custom");
        }
        config = args.table == "1" ? table1_preset(0) : table2_preset(0);
    }

    std::optional<std::uint64_t> seed = args.seed ? args.seed : file_seed;
    if (!seed) {
        seed = seed_from_env();
    }
    if (!seed) {
        throw UsageError("mc needs a seed: pass --seed or set " + std::string(kSeedEnv));
    }
    config.master_seed = *seed;

    if (args.replicates) {
        config.replicates = *args.replicates;
    } else if (args.quick) {
        config.replicates = kQuickReplicates;
    } else if (!file_replicates) {
        config.replicates = kDefaultReplicates;
    }
    if (args.divisor) {
        config.variance_divisor = parse_divisor(*args.divisor);
    }
    if (args.psi_mode) {
        config.psi_mode = parse_psi_mode(*args.psi_mode);
    }
    config.validate();

    const unsigned threads =
        args.threads > 0 ? args.threads : std::max(1u, std::thread::hardware_concurrency());
    const std::vector<CellReport> reports = run_experiment(config, threads);

    std::ostringstream buffer;
    if (args.plot_data) {
        write_mc_long_csv(buffer, reports, config.distribution);
    } else if (args.format == "json") {
        write_mc_json(buffer, reports);
    } else if (args.format == "table") {
        write_mc_table(buffer, reports, config.distribution);
    } else {
        write_mc_csv(buffer, reports);
    }
    OutputTarget target(args.out, out);
    target.get() << buffer.str();
    target.get().flush();
    return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string fn;
    std::string dist;
    std::optional<double> alpha;
    std::optional<double> nu;
    std::optional<double> tau;
    std::optional<double> delta;
    std::optional<double> beta;
    std::optional<double> t;
    std::optional<double> x;
    std::optional<double> q;
};

double need(const std::optional<double>& value, const char* flag, const std::string& fn) {
    if (!value) {
        throw UsageError("--fn " + fn + " requires " + flag);
    }
    return *value;
}

std::string log_moments_json(const LogMomentSet& m) {
    auto num = [](double v) { return format_number(v, kEvalDigits); };
    return "{\"mean\": " + num(m.mean) + ", \"variance\": " + num(m.variance)
           + ", \"third_central\": " + num(m.third_central)
           + ", \"fourth_central\": " + num(m.fourth_central) + "}";
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const std::string& fn = a.fn;
    auto scalar = [&out](double v) {
        out << format_number(v, kEvalDigits) << '\n';
        return kExitOk;
    };
    if (fn == "mlf") {
        return scalar(special::mittag_leffler(need(a.alpha, "--alpha", fn), need(a.nu, "--nu", fn),
                                              need(a.tau, "--tau", fn)));
    }
    if (fn == "ml-pdf") {
        const MLParams p(need(a.alpha, "--alpha", fn), need(a.delta, "--delta", fn));
        return scalar(ml_pdf(p, need(a.t, "--t", fn)));
    }
    if (fn == "gml-cdf") {
        const GMLParams p(need(a.alpha, "--alpha", fn), need(a.beta, "--beta", fn));
        return scalar(gml_cdf(p, need(a.x, "--x", fn)));
    }
    if (fn == "ml-moment") {
        const MLParams p(need(a.alpha, "--alpha", fn), need(a.delta, "--delta", fn));
        return scalar(ml_fractional_moment(p, need(a.q, "--q", fn)));
    }
    if (fn == "gml-moment") {
        const GMLParams p(need(a.alpha, "--alpha", fn), need(a.beta, "--beta", fn));
        return scalar(gml_fractional_moment(p, need(a.q, "--q", fn)));
    }
    // log-moments
    if (a.dist.empty()) {
        throw UsageError("--fn log-moments requires --dist");
    }
    if (a.dist == "ml") {
        const MLParams p(need(a.alpha, "--alpha", fn), need(a.delta, "--delta", fn));
        out << log_moments_json(ml_log_moments(p)) << '\n';
        return kExitOk;
    }
    const GMLParams p(need(a.alpha, "--alpha", fn), need(a.beta, "--beta", fn));
    const double d2 = gml_log_cumulant(p, 2);
    const LogMomentSet m{gml_log_cumulant(p, 1), d2, gml_log_cumulant(p, 3),
                         gml_log_cumulant(p, 4) + 3.0 * d2 * d2};
    out << log_moments_json(m) << '\n';
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Estimate Mittag-Leffler and generalized Mittag-Leffler parameters", "mlefit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    const std::vector<std::string> dists = {"ml", "gml"};
    const std::vector<std::string> psi_modes = {"accurate", "truncated"};
    const std::vector<std::string> divisors = {"n", "n-1"};

    SampleArgs sample;
    CLI::App* sample_cmd = app.add_subcommand("sample", "Draw variates, one per line");
    sample_cmd->add_option("--dist", sample.dist, "Distribution")->required()->check(CLI::IsMember(dists));
    sample_cmd->add_option("--alpha", sample.alpha, "Index alpha in (0, 1]")->required();
    sample_cmd->add_option("--delta", sample.delta, "ML scale delta > 0");
    sample_cmd->add_option("--beta", sample.beta, "GML shape beta > 0");
    sample_cmd->add_option("--n", sample.n, "Number of variates")->required();
    sample_cmd->add_option("--seed", sample.seed, "Seed (default: $MLEFIT_SEED, then OS entropy)");
    sample_cmd->add_option("--out", sample.out, "Output file (default stdout)");

    FitArgs fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit parameters to positive data, one per line");
    fit_cmd->add_option("--dist", fit.dist, "Distribution")->required()->check(CLI::IsMember(dists));
    fit_cmd->add_option("--method", fit.method, "Estimator")
        ->required()
        ->check(CLI::IsMember({"log", "frac"}));
    fit_cmd->add_option("--input", fit.input, "Input file (default stdin)");
    fit_cmd->add_option("--ci-level", fit.ci_level, "Confidence level for ML intervals");
    fit_cmd->add_option("--psi-mode", fit.psi_mode, "Digamma evaluation for the GML log fit")
        ->check(CLI::IsMember(psi_modes));
    fit_cmd->add_option("--variance-divisor", fit.divisor, "Log-variance divisor (default n-1)")
        ->check(CLI::IsMember(divisors));

    McArgs mc;
    CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo bias and RMSE tables");
    mc_cmd->add_option("--table", mc.table, "Preset table or custom")
        ->required()
        ->check(CLI::IsMember({"1", "2", "custom"}));
    mc_cmd->add_option("--config", mc.config_path, "Experiment file for --table custom");
    mc_cmd->add_option("--replicates", mc.replicates, "Replicates per cell")
        ->check(CLI::PositiveNumber);
    mc_cmd->add_flag("--quick", mc.quick, "Use the short replicate count");
    mc_cmd->add_option("--seed", mc.seed, "Master seed (default: $MLEFIT_SEED)");
    mc_cmd->add_option("--threads", mc.threads, "Worker threads (default: all cores)");
    mc_cmd->add_option("--format", mc.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "table"}));
    mc_cmd->add_option("--out", mc.out, "Output file (default stdout)");
    mc_cmd->add_flag("--plot-data", mc.plot_data, "Emit long-format CSV for plotting");
    mc_cmd->add_option("--variance-divisor", mc.divisor, "Log-variance divisor (default n-1)")
        ->check(CLI::IsMember(divisors));
    mc_cmd->add_option("--psi-mode", mc.psi_mode, "Digamma evaluation for the GML log fit")
        ->check(CLI::IsMember(psi_modes));

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a special function or moment");
    eval_cmd->add_option("--fn", eval.fn, "Function")
        ->required()
        ->check(CLI::IsMember({"mlf", "ml-pdf", "gml-cdf", "ml-moment", "gml-moment", "log-moments"}));
    eval_cmd->add_option("--dist", eval.dist, "Distribution for log-moments")
        ->check(CLI::IsMember(dists));
    eval_cmd->add_option("--alpha", eval.alpha, "alpha");
    eval_cmd->add_option("--nu", eval.nu, "Second Mittag-Leffler index");
    eval_cmd->add_option("--tau", eval.tau, "Mittag-Leffler argument");
    eval_cmd->add_option("--delta", eval.delta, "ML scale");
    eval_cmd->add_option("--beta", eval.beta, "GML shape");
    eval_cmd->add_option("--t", eval.t, "Density argument");
    eval_cmd->add_option("--x", eval.x, "CDF argument");
    eval_cmd->add_option("--q", eval.q, "Moment order");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sample_cmd->parsed()) {
            return cmd_sample(sample, out);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(fit, in, out, err);
        }
        if (mc_cmd->parsed()) {
            return cmd_mc(mc, out);
        }
        return cmd_eval(eval, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    }
}

} // namespace mlefit::cli
