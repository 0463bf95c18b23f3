#include "mlefit/cli.hpp"

#include "mlefit/errors.hpp"

#include <charconv>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace mlefit::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> parts;
    for (;;) {
        const auto comma = s.find(',');
        parts.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) {
            return parts;
        }
        s.remove_prefix(comma + 1);
    }
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    throw DomainError("line " + std::to_string(line) + ": " + message);
}

template <class T>
T parse_number(std::string_view text, std::size_t line, std::string_view what) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
        fail(line, "invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

ParsedExperiment parse_experiment(std::istream& in) {
    ParsedExperiment parsed;
    parsed.config.cells.clear();
    bool have_distribution = false;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = trim(text);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            fail(line, "expected 'key = value'");
        }
        const std::string_view key = trim(text.substr(0, eq));
        const std::string_view value = trim(text.substr(eq + 1));

        if (key == "distribution") {
            if (value == "ml") {
                parsed.config.distribution = Distribution::ML;
            } else if (value == "gml") {
                parsed.config.distribution = Distribution::GML;
            } else {
                fail(line, "distribution must be ml or gml");
            }
            have_distribution = true;
        } else if (key == "replicates") {
            parsed.config.replicates = parse_number<std::size_t>(value, line, "replicates");
            if (parsed.config.replicates < 1) {
                fail(line, "replicates must be at least 1");
            }
            parsed.replicates_given = true;
        } else if (key == "seed") {
            parsed.seed = parse_number<std::uint64_t>(value, line, "seed");
        } else if (key == "estimators") {
            parsed.config.estimators.clear();
            for (std::string_view name : split_commas(value)) {
                if (name == "log") {
                    parsed.config.estimators.push_back(Method::LogMoment);
                } else if (name == "frac") {
                    parsed.config.estimators.push_back(Method::FractionalMoment);
                } else {
                    fail(line, "unknown estimator '" + std::string(name) + "' (expected log or frac)");
                }
            }
        } else if (key == "psi_mode") {
            if (value == "accurate") {
                parsed.config.psi_mode = PsiMode::Accurate;
            } else if (value == "truncated") {
                parsed.config.psi_mode = PsiMode::PaperTruncated;
            } else {
                fail(line, "psi_mode must be accurate or truncated");
            }
        } else if (key == "variance_divisor") {
            if (value == "n") {
                parsed.config.variance_divisor = VarianceDivisor::N;
            } else if (value == "n-1") {
                parsed.config.variance_divisor = VarianceDivisor::NMinusOne;
            } else {
                fail(line, "variance_divisor must be n or n-1");
            }
        } else if (key == "cell") {
            const auto parts = split_commas(value);
            if (parts.size() != 3) {
                fail(line, "cell needs three fields: alpha, delta or beta, n");
            }
            parsed.config.cells.push_back({parse_number<double>(parts[0], line, "alpha"),
                                           parse_number<double>(parts[1], line, "parameter"),
                                           parse_number<std::size_t>(parts[2], line, "n")});
        } else {
            fail(line, "unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_distribution) {
        throw DomainError("config: missing 'distribution'");
    }
    if (parsed.config.cells.empty()) {
        throw DomainError("config: at least one 'cell' is required");
    }
    parsed.config.validate();
    return parsed;
}

} // namespace mlefit::cli
