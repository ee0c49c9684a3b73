#include "wordlelab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wordlelab/export.hpp"

namespace wordlelab {

using nlohmann::json;

namespace {

std::string fixed(double v, int precision) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    std::string s = buf;
    // "-0.00" reads as a sign where there is none.
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

// JSON has no NaN or infinity; those travel as strings.
json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::nan("");
        if (s == "inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
        throw std::invalid_argument("unexpected numeric token '" + s + "'");
    }
    return j.get<double>();
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
    return out;
}

Eigen::VectorXd vector_from(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from(j[i]);
    return v;
}

std::string pad(const std::string& s, std::size_t width, bool left) {
    if (s.size() >= width) return s;
    const std::string fill(width - s.size(), ' ');
    return left ? s + fill : fill + s;
}

std::string render_text(const std::vector<RegressionResult>& results, int precision) {
    // Terms in first-seen order across columns.
    std::vector<std::string> terms;
    for (const auto& r : results) {
        for (const auto& n : r.names) {
            if (std::find(terms.begin(), terms.end(), n) == terms.end()) terms.push_back(n);
        }
    }

    std::vector<std::vector<std::string>> rows;  // first cell is the label
    auto add = [&](std::string label, auto cell) {
        std::vector<std::string> row{std::move(label)};
        for (const auto& r : results) row.push_back(cell(r));
        rows.push_back(std::move(row));
    };
    add("", [](const RegressionResult& r) { return r.dependent; });
    add("", [i = 0](const RegressionResult&) mutable { return "(" + std::to_string(++i) + ")"; });
    const std::size_t header_rows = rows.size();
    for (const auto& term : terms) {
        add(term, [&](const RegressionResult& r) -> std::string {
            auto it = std::find(r.names.begin(), r.names.end(), term);
            if (it == r.names.end()) return "";
            const auto j = static_cast<Eigen::Index>(it - r.names.begin());
            return fixed(r.estimates(j), precision) + significance_stars(r.p_values(j));
        });
        add("", [&](const RegressionResult& r) -> std::string {
            auto it = std::find(r.names.begin(), r.names.end(), term);
            if (it == r.names.end()) return "";
            return "(" + fixed(r.std_errors(it - r.names.begin()), precision) + ")";
        });
    }
    const std::size_t body_end = rows.size();
    add("Observations", [](const RegressionResult& r) { return std::to_string(r.n_observations); });
    add("Number of Participants", [](const RegressionResult& r) { return std::to_string(r.n_clusters); });

    std::vector<std::size_t> widths(results.size() + 1, 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::size_t total = 0;
    for (auto w : widths) total += w + 2;
    const std::string rule(total, '-');

    std::string out = rule + '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == header_rows || i == body_end) out += rule + '\n';
        std::string line;
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            line += pad(rows[i][c], widths[c], c == 0);
            line += "  ";
        }
        line.erase(line.find_last_not_of(' ') + 1);
        out += line + '\n';
    }
    out += rule + '\n';
    std::string se_note = "cluster-robust standard errors by participant";
    if (!results.empty() && results.front().correction == SmallSampleCorrection::CR1) se_note += " (CR1)";
    out += "Note: *p<0.05; **p<0.01; ***p<0.001; " + se_note + "\n";
    for (const auto& r : results) {
        if (r.dropped.empty()) continue;
        out += "Dropped as collinear in " + r.dependent + ":";
        for (const auto& d : r.dropped) out += " " + d + ";";
        out.back() = '\n';
    }
    return out;
}

std::string render_csv(const std::vector<RegressionResult>& results) {
    std::string out = "dv,term,estimate,std_error,t_stat,p_value,stars,n_observations,n_clusters\n";
    for (const auto& r : results) {
        for (std::size_t j = 0; j < r.names.size(); ++j) {
            const auto k = static_cast<Eigen::Index>(j);
            out += csv_escape(r.dependent) + ',' + csv_escape(r.names[j]) + ',' + format_number(r.estimates(k)) + ',' +
                   format_number(r.std_errors(k)) + ',' + format_number(r.t_stats(k)) + ',' +
                   format_number(r.p_values(k)) + ',' + significance_stars(r.p_values(k)) + ',' +
                   std::to_string(r.n_observations) + ',' + std::to_string(r.n_clusters) + '\n';
        }
    }
    return out;
}

}  // namespace

std::optional<TableFormat> parse_table_format(std::string_view token) noexcept {
    if (token == "text") return TableFormat::Text;
    if (token == "csv") return TableFormat::Csv;
    if (token == "json") return TableFormat::Json;
    return std::nullopt;
}

json to_json(const RegressionResult& r) {
    json cov = json::array();
    for (Eigen::Index i = 0; i < r.covariance.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < r.covariance.cols(); ++j) row.push_back(number(r.covariance(i, j)));
        cov.push_back(std::move(row));
    }
    return {{"dependent", r.dependent},
            {"names", r.names},
            {"estimates", vector_json(r.estimates)},
            {"std_errors", vector_json(r.std_errors)},
            {"t_stats", vector_json(r.t_stats)},
            {"p_values", vector_json(r.p_values)},
            {"covariance", cov},
            {"residuals", vector_json(r.residuals)},
            {"n_observations", r.n_observations},
            {"n_clusters", r.n_clusters},
            {"correction", to_string(r.correction)},
            {"dropped", r.dropped}};
}

RegressionResult result_from_json(const json& j) {
    RegressionResult r;
    r.dependent = j.at("dependent").get<std::string>();
    r.names = j.at("names").get<std::vector<std::string>>();
    r.estimates = vector_from(j.at("estimates"));
    r.std_errors = vector_from(j.at("std_errors"));
    r.t_stats = vector_from(j.at("t_stats"));
    r.p_values = vector_from(j.at("p_values"));
    const auto& cov = j.at("covariance");
    const auto k = static_cast<Eigen::Index>(cov.size());
    r.covariance.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& row = cov[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != k) throw std::invalid_argument("covariance must be square");
        for (Eigen::Index c = 0; c < k; ++c) r.covariance(i, c) = number_from(row[static_cast<std::size_t>(c)]);
    }
    r.residuals = vector_from(j.at("residuals"));
    r.n_observations = j.at("n_observations").get<std::size_t>();
    r.n_clusters = j.at("n_clusters").get<std::size_t>();
    r.correction = j.at("correction").get<std::string>() == "CR1" ? SmallSampleCorrection::CR1 : SmallSampleCorrection::None;
    r.dropped = j.value("dropped", std::vector<std::string>{});
    return r;
}

std::vector<RegressionResult> parse_results(std::string_view json_text) {
    auto j = json::parse(json_text);
    std::vector<RegressionResult> out;
    if (j.is_object()) j = json::array({j});
    for (const auto& item : j) out.push_back(result_from_json(item));
    return out;
}

std::string render_table(const std::vector<RegressionResult>& results, TableFormat format, int precision) {
    switch (format) {
        case TableFormat::Text: return render_text(results, precision);
        case TableFormat::Csv: return render_csv(results);
        case TableFormat::Json: {
            json arr = json::array();
            for (const auto& r : results) arr.push_back(to_json(r));
            return arr.dump(2) + '\n';
        }
    }
    return {};
}

}  // namespace wordlelab
