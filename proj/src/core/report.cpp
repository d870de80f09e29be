#include "core/report.hpp"

#include <cmath>

#include "core/io.hpp"
#include "core/variance_engine.hpp"

namespace mbv {

namespace {

using nlohmann::ordered_json;

ordered_json number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json matrix_json(const SymmetricMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t j = 0; j < m.size(); ++j) {
        ordered_json row = ordered_json::array();
        for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m.at(j, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

void append_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x",
                                  static_cast<unsigned>(c));
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    out.push_back('"');
}

void serialize(const ordered_json& v, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case ordered_json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                append_escaped(out, it.key());
                out += ": ";
                serialize(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                serialize(item, out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case ordered_json::value_t::string:
            append_escaped(out, v.get_ref<const std::string&>());
            return;
        case ordered_json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            return;
        case ordered_json::value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            return;
        case ordered_json::value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            return;
        case ordered_json::value_t::number_float: {
            const double d = v.get<double>();
            if (!std::isfinite(d)) {
                out += "null";
                return;
            }
            out += format_double17(d);
            return;
        }
        default:
            out += "null";
            return;
    }
}

void flatten_scalars(const ordered_json& v, const std::string& prefix,
                     std::string& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            const std::string path =
                prefix.empty() ? it.key() : prefix + '.' + it.key();
            flatten_scalars(it.value(), path, out);
        }
        return;
    }
    if (v.is_array()) return;  // tables are rendered separately
    out += prefix + ',';
    if (v.is_string()) {
        out += v.get_ref<const std::string&>();
    } else if (v.is_boolean()) {
        out += v.get<bool>() ? "true" : "false";
    } else if (v.is_number_float()) {
        out += format_double17(v.get<double>());
    } else if (v.is_number()) {
        out += v.dump();
    } else {
        out += "null";
    }
    out += '\n';
}

void append_matrix_csv(std::string& out, const std::string& name,
                       const ordered_json& ids, const ordered_json& matrix) {
    out += '\n' + name;
    for (const auto& id : ids) out += ',' + id.get<std::string>();
    out += '\n';
    for (std::size_t j = 0; j < matrix.size(); ++j) {
        out += ids[j].get<std::string>();
        for (const auto& cell : matrix[j])
            out += ',' + format_double17(cell.get<double>());
        out += '\n';
    }
}

}  // namespace

nlohmann::ordered_json build_report(const AnalysisResult& a,
                                    const ReportInputs& inputs) {
    ordered_json doc;
    doc["schema_version"] = 1;

    doc["inputs"] = {
        {"trades", inputs.trades_path},
        {"portfolio", inputs.portfolio_path},
        {"window",
         {{"mode", inputs.window_mode},
          {"center", inputs.window_center},
          {"width", inputs.window_width},
          {"buckets", inputs.buckets},
          {"lenient", inputs.lenient}}},
        {"format", inputs.format},
    };

    doc["window"] = {
        {"center", a.window.center},
        {"width", a.window.width()},
        {"requested_buckets", a.requested_buckets},
        {"effective_buckets", a.effective_buckets},
        {"merged_buckets", a.requested_buckets - a.effective_buckets},
        {"bucket_seconds", a.window.bucket_seconds()},
    };

    doc["portfolio"] = {
        {"securities", a.securities.size()},
        {"price_t0", a.price_t0},
        {"vwap", a.variance.mean_price},
        {"gross_return", a.variance.gross_return},
        {"total_shares", a.total_shares},
        {"total_value", a.total_value},
        {"volume_conservation_rel", a.volume_conservation_rel},
    };

    const MomentSet& m = a.moments;
    doc["moments"] = {
        {"buckets", m.sample_count},
        {"mean_value", m.mean_value},
        {"mean_volume", m.mean_volume},
        {"mean_sq_value", m.mean_sq_value},
        {"mean_sq_volume", m.mean_sq_volume},
        {"sigma_value", m.sigma_value},
        {"sigma_volume", m.sigma_volume},
        {"psi", m.value_cv},
        {"chi", m.volume_cv},
        {"cov_value_volume", m.cov_value_volume},
        {"phi", m.phi},
        {"a", m.corr_a},
        {"psi0", m.price_cv_psi0},
        {"psi0_sq_exceeds_unit", a.variance.psi0_sq_exceeds_unit},
        {"chi_exceeds_unit", a.variance.chi_exceeds_unit},
    };

    const VarianceResult& v = a.variance;
    const RegimeReport& regime = v.regime;
    ordered_json regime_json = {
        {"tag", regime_name(regime.tag)},
        {"y_chi_over_psi0",
         regime.y ? ordered_json(*regime.y) : ordered_json(nullptr)},
        {"asymptotic_theta", number_or_null(regime.asymptotic_theta)},
        {"vanishing_chi", regime.vanishing_chi
                              ? ordered_json(*regime.vanishing_chi)
                              : ordered_json(nullptr)},
        {"underestimation_ratio",
         regime.underestimation_ratio
             ? ordered_json(*regime.underestimation_ratio)
             : ordered_json(nullptr)},
        {"note", regime.note},
    };

    doc["variance"] = {
        {"phi_weighted", v.phi_weighted},
        {"phi_closed", v.phi_closed},
        {"phi_rel_diff", v.phi_rel_diff},
        {"numerical_warning", v.numerical_warning},
        {"theta_weighted", v.theta_weighted},
        {"theta_closed", v.theta_closed},
        {"theta_rel_diff", v.theta_rel_diff},
        {"theta_markowitz", v.theta_markowitz},
        {"mu", v.mu},
        {"second_moment_price", v.second_moment_price},
        {"taylor",
         {{"mu", v.taylor.mu.mu},
          {"constant", v.taylor.mu.constant},
          {"linear", v.taylor.mu.linear},
          {"quadratic", v.taylor.mu.quadratic},
          {"phi", v.taylor.phi},
          {"theta", v.taylor.theta},
          {"theta_form_3_3", v.theta_form_3_3},
          {"form_equivalence_rel_diff",
           std::fabs(v.taylor.theta - v.theta_form_3_3) /
               std::fmax(std::fmax(std::fabs(v.taylor.theta),
                                   std::fabs(v.theta_form_3_3)),
                         1e-300)},
          {"within_validity", v.taylor.within_validity}}},
        {"regime", std::move(regime_json)},
    };

    ordered_json securities = ordered_json::array();
    ordered_json ids = ordered_json::array();
    for (const SecurityBreakdown& s : a.securities) {
        ids.push_back(s.id);
        securities.push_back({
            {"id", s.id},
            {"x", s.x_weight},
            {"X", s.value_weight},
            {"price_t0", s.price_t0},
            {"vwap", s.vwap},
            {"gross_return", s.gross_return},
            {"chi_j", s.chi_j},
            {"beta_j", s.beta_j},
        });
    }

    doc["decomposition"] = {
        {"ids", std::move(ids)},
        {"securities", std::move(securities)},
        {"beta_matrix", matrix_json(a.volume_decomp.beta_jk)},
        {"chi_matrix", matrix_json(a.volume_decomp.chi_jk)},
        {"theta_matrix", matrix_json(a.theta_jk)},
        {"chi_sq_portfolio", a.chi_sq_portfolio},
        {"chi_sq_reconstructed", a.volume_decomp.chi_sq_reconstructed},
        {"chi_sq_rel_diff", a.chi_sq_rel_diff},
        {"chi_exact", a.moments.volume_cv},
        {"chi_linear_approx", a.chi_linear},
        {"chi_linear_abs_diff", a.chi_linear_abs_diff},
        {"theta_markowitz_direct", v.theta_markowitz},
        {"theta_markowitz_quadratic_form", a.theta_markowitz_quadratic_form},
        {"theta_markowitz_rel_diff", a.theta_markowitz_rel_diff},
        {"vwap_direct", v.mean_price},
        {"vwap_decomposed", a.vwap_decomposed},
        {"vwap_rel_diff", a.vwap_rel_diff},
        {"return_direct", v.gross_return},
        {"return_decomposed", a.return_decomposed},
        {"return_rel_diff", a.return_rel_diff},
        {"taylor_theta_decomposed", a.taylor_decomp.theta},
        {"taylor_chi_linear", a.taylor_decomp.chi_linear},
        {"taylor_chi_sq_bilinear", a.taylor_decomp.chi_sq_bilinear},
        {"return_factor", a.taylor_decomp.return_factor},
        {"return_factor_rel_diff", a.return_factor_rel_diff},
    };

    doc["divergence"] = {
        {"theta_ratio", a.theta_ratio ? ordered_json(*a.theta_ratio)
                                      : ordered_json(nullptr)},
        {"markowitz_bias", a.markowitz_bias},
    };
    return doc;
}

std::string serialize_report(const nlohmann::ordered_json& document) {
    std::string out;
    serialize(document, out, 0);
    out.push_back('\n');
    return out;
}

std::string report_csv(const nlohmann::ordered_json& document) {
    std::string out = "metric,value\n";
    flatten_scalars(document, "", out);

    const auto& decomposition = document.at("decomposition");
    out += "\nsecurity,x,X,price_t0,vwap,gross_return,chi_j,beta_j\n";
    for (const auto& s : decomposition.at("securities")) {
        out += s.at("id").get<std::string>();
        for (const char* key :
             {"x", "X", "price_t0", "vwap", "gross_return", "chi_j", "beta_j"})
            out += ',' + format_double17(s.at(key).get<double>());
        out += '\n';
    }
    const auto& ids = decomposition.at("ids");
    append_matrix_csv(out, "beta_jk", ids, decomposition.at("beta_matrix"));
    append_matrix_csv(out, "chi_jk", ids, decomposition.at("chi_matrix"));
    append_matrix_csv(out, "theta_jk", ids, decomposition.at("theta_matrix"));
    return out;
}

}  // namespace mbv
