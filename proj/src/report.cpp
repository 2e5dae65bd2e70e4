#include "idrisk/report.hpp"

#include "idrisk/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace idrisk {

using nlohmann::json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json json_number(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

namespace {

std::string csv_line(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    out += '\n';
    return out;
}

json tail_json(const TailEstimate& t) {
    return {{"xi", json_number(t.xi)},         {"trials", t.trials},
            {"hits", t.hits},                  {"point", json_number(t.point)},
            {"ci_low", json_number(t.ci_low)}, {"ci_high", json_number(t.ci_high)}};
}

json report_json(const BoundReport& r) {
    return {{"xi", json_number(r.xi)},         {"value", json_number(r.value)},
            {"method", std::string(to_string(r.method))},
            {"N", r.n},                        {"lambda", json_number(r.lambda)},
            {"V", json_number(r.V)},           {"R", json_number(r.R)},
            {"ln_cov", json_number(r.ln_cov)}};
}

}  // namespace

std::string bound_reports_csv(std::span<const BoundReport> reports) {
    std::string out = "xi,value,method,N,lambda,V,R,ln_cov\n";
    for (const auto& r : reports) {
        out += csv_line({format_number(r.xi), format_number(r.value), std::string(to_string(r.method)),
                         std::to_string(r.n), format_number(r.lambda), format_number(r.V),
                         format_number(r.R), format_number(r.ln_cov)});
    }
    return out;
}

json bound_reports_json(std::span<const BoundReport> reports) {
    json out = json::array();
    for (const auto& r : reports) out.push_back(report_json(r));
    return out;
}

std::string dominance_csv(std::span<const DominanceRow> rows) {
    std::string out = "xi,trials,hits,point,ci_low,ci_high,bound_integral,bound_closed,violation\n";
    for (const auto& r : rows) {
        out += csv_line({format_number(r.tail.xi), std::to_string(r.tail.trials),
                         std::to_string(r.tail.hits), format_number(r.tail.point),
                         format_number(r.tail.ci_low), format_number(r.tail.ci_high),
                         format_number(r.integral.value), format_number(r.closed.value),
                         r.violation ? "1" : "0"});
    }
    return out;
}

json dominance_json(std::span<const DominanceRow> rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"tail", tail_json(r.tail)},
                       {"integral", report_json(r.integral)},
                       {"closed", report_json(r.closed)},
                       {"violation", r.violation}});
    }
    return out;
}

std::string risk_dominance_csv(std::span<const RiskDominanceRow> rows) {
    std::string out = "xi,trials,hits,point,ci_low,ci_high,ln_cov,bound_risk_closed,violation\n";
    for (const auto& r : rows) {
        out += csv_line({format_number(r.tail.xi), std::to_string(r.tail.trials),
                         std::to_string(r.tail.hits), format_number(r.tail.point),
                         format_number(r.tail.ci_low), format_number(r.tail.ci_high),
                         format_number(r.closed.ln_cov), format_number(r.closed.value),
                         r.violation ? "1" : "0"});
    }
    return out;
}

json risk_dominance_json(std::span<const RiskDominanceRow> rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"tail", tail_json(r.tail)},
                       {"risk_closed", report_json(r.closed)},
                       {"violation", r.violation}});
    }
    return out;
}

std::string rate_sweep_csv(const RateSweepResult& result) {
    std::string out = "N,bound_radius,mc_sup_dev,gamma_used,ln_cov,gamma_admissible\n";
    for (const auto& r : result.rows) {
        out += csv_line({std::to_string(r.n), format_number(r.bound_radius),
                         format_number(r.mc_sup_dev), format_number(r.gamma_used),
                         format_number(r.ln_cov), r.gamma_admissible ? "1" : "0"});
    }
    return out;
}

json rate_sweep_json(const RateSweepResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"N", r.n},
                        {"bound_radius", json_number(r.bound_radius)},
                        {"mc_sup_dev", json_number(r.mc_sup_dev)},
                        {"gamma_used", json_number(r.gamma_used)},
                        {"ln_cov", json_number(r.ln_cov)},
                        {"gamma_admissible", r.gamma_admissible}});
    }
    return {{"rows", rows},
            {"bound_slope", json_number(result.bound_slope)},
            {"mc_slope", json_number(result.mc_slope)},
            {"reference_slope", json_number(result.reference_slope)},
            {"note", result.note}};
}

std::string series_csv(const Series& series) {
    std::string out = "x," + series.name + "\n";
    for (const auto& [x, y] : series.points) out += csv_line({format_number(x), format_number(y)});
    return out;
}

std::string plot_data(std::span<const Series> series) {
    std::string out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += "# " + series[i].name + "\n";
        for (const auto& [x, y] : series[i].points) {
            out += format_number(x) + ' ' + format_number(y) + '\n';
        }
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file << content;
    file.flush();
    if (!file) throw IoError("write failed: " + path.string());
}

}  // namespace idrisk
