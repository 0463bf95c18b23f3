#include "mlefit/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>

namespace mlefit::cli {

namespace {

constexpr int kCsvDigits = 17;

const char* second_param_name(Distribution dist) {
    return dist == Distribution::ML ? "delta" : "beta";
}

} // namespace

std::string format_number(double value, int significant_digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", significant_digits, value);
    return buffer;
}

void write_mc_csv(std::ostream& out, const std::vector<CellReport>& reports) {
    auto num = [](double v) { return format_number(v, kCsvDigits); };
    out << "# mlefit-mc v1\n";
    out << "alpha_true,param2_true,n,estimator,bias_p1,se_bias_p1,rmse_p1,bias_p2,se_bias_p2,"
           "rmse_p2,failures\n";
    for (const CellReport& report : reports) {
        for (const EstimatorReport& e : report.estimators) {
            out << num(report.cell.param1) << ',' << num(report.cell.param2) << ','
                << report.cell.n << ',' << to_string(e.method) << ',' << num(e.bias_param1) << ','
                << num(e.se_bias_param1) << ',' << num(e.rmse_param1) << ','
                << num(e.bias_param2) << ',' << num(e.se_bias_param2) << ','
                << num(e.rmse_param2) << ',' << e.failures << '\n';
        }
    }
}

void write_mc_json(std::ostream& out, const std::vector<CellReport>& reports) {
    // NaN is not representable in JSON; emit null.
    auto num = [](double v) -> nlohmann::ordered_json {
        return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const CellReport& report : reports) {
        for (const EstimatorReport& e : report.estimators) {
            nlohmann::ordered_json row;
            row["alpha_true"] = report.cell.param1;
            row["param2_true"] = report.cell.param2;
            row["n"] = report.cell.n;
            row["estimator"] = std::string(to_string(e.method));
            row["bias_p1"] = num(e.bias_param1);
            row["se_bias_p1"] = num(e.se_bias_param1);
            row["rmse_p1"] = num(e.rmse_param1);
            row["bias_p2"] = num(e.bias_param2);
            row["se_bias_p2"] = num(e.se_bias_param2);
            row["rmse_p2"] = num(e.rmse_param2);
            row["failures"] = e.failures;
            rows.push_back(std::move(row));
        }
    }
    out << rows.dump(2) << '\n';
}

void write_mc_table(std::ostream& out, const std::vector<CellReport>& reports, Distribution dist) {
    const std::string p2 = second_param_name(dist);
    out << std::left << std::setw(8) << "alpha" << std::setw(10) << p2 << std::setw(8) << "n"
        << std::setw(6) << "est" << std::right << std::setw(12) << "bias(a)" << std::setw(12)
        << "rmse(a)" << std::setw(14) << ("bias(" + p2.substr(0, 1) + ")") << std::setw(14)
        << ("rmse(" + p2.substr(0, 1) + ")") << std::setw(10) << "failures" << '\n';
    for (const CellReport& report : reports) {
        for (const EstimatorReport& e : report.estimators) {
            out << std::left << std::setw(8) << format_number(report.cell.param1, 6)
                << std::setw(10) << format_number(report.cell.param2, 6) << std::setw(8)
                << report.cell.n << std::setw(6) << to_string(e.method) << std::right
                << std::setw(12) << format_number(e.bias_param1, 4) << std::setw(12)
                << format_number(e.rmse_param1, 4) << std::setw(14)
                << format_number(e.bias_param2, 5) << std::setw(14)
                << format_number(e.rmse_param2, 5) << std::setw(10) << e.failures << '\n';
        }
    }
}

void write_mc_long_csv(std::ostream& out, const std::vector<CellReport>& reports,
                       Distribution dist) {
    auto num = [](double v) { return format_number(v, kCsvDigits); };
    out << "# mlefit-mc-long v1\n";
    out << "alpha_true,param2_true,n,estimator,parameter,statistic,value\n";
    for (const CellReport& report : reports) {
        for (const EstimatorReport& e : report.estimators) {
            const std::string prefix = num(report.cell.param1) + ',' + num(report.cell.param2)
                                       + ',' + std::to_string(report.cell.n) + ','
                                       + std::string(to_string(e.method)) + ',';
            const struct {
                const char* parameter;
                const char* statistic;
                double value;
            } rows[] = {
                {"alpha", "bias", e.bias_param1},
                {"alpha", "se_bias", e.se_bias_param1},
                {"alpha", "rmse", e.rmse_param1},
                {second_param_name(dist), "bias", e.bias_param2},
                {second_param_name(dist), "se_bias", e.se_bias_param2},
                {second_param_name(dist), "rmse", e.rmse_param2},
            };
            for (const auto& row : rows) {
                out << prefix << row.parameter << ',' << row.statistic << ',' << num(row.value)
                    << '\n';
            }
        }
    }
}

} // namespace mlefit::cli
