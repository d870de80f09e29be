#include "mbv/mbv.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/analysis.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/report.hpp"
#include "core/synthetic.hpp"

namespace {

thread_local std::string g_last_error;

mbv_status status_from(mbv::ErrorCode code) {
    using mbv::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return MBV_ERR_INVALID_ARGUMENT;
        case ErrorCode::nonpositive_field: return MBV_ERR_NONPOSITIVE_FIELD;
        case ErrorCode::unsorted_input: return MBV_ERR_UNSORTED_INPUT;
        case ErrorCode::empty_bucket: return MBV_ERR_EMPTY_BUCKET;
        case ErrorCode::degenerate_series: return MBV_ERR_DEGENERATE_SERIES;
        case ErrorCode::zero_total_volume: return MBV_ERR_ZERO_TOTAL_VOLUME;
        case ErrorCode::unknown_security: return MBV_ERR_UNKNOWN_SECURITY;
        case ErrorCode::mismatched_length: return MBV_ERR_MISMATCHED_LENGTH;
        case ErrorCode::empty_list: return MBV_ERR_EMPTY_LIST;
        case ErrorCode::zero_weight_sum: return MBV_ERR_ZERO_WEIGHT_SUM;
        case ErrorCode::weight_sum: return MBV_ERR_WEIGHT_SUM;
        case ErrorCode::domain: return MBV_ERR_DOMAIN;
        case ErrorCode::infeasible_targets: return MBV_ERR_INFEASIBLE_TARGETS;
        case ErrorCode::io: return MBV_ERR_IO;
        case ErrorCode::parse: return MBV_ERR_PARSE;
        case ErrorCode::internal: return MBV_ERR_INTERNAL;
    }
    return MBV_ERR_INTERNAL;
}

template <typename Fn>
mbv_status guarded(Fn&& fn) {
    try {
        fn();
        return MBV_OK;
    } catch (const mbv::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MBV_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return MBV_ERR_INTERNAL;
    }
}

mbv_status invalid(const char* message) {
    g_last_error = message;
    return MBV_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct mbv_ticks {
    std::vector<mbv::TradeTick> ticks;
};

struct mbv_portfolio {
    mbv::PortfolioSpec spec;
};

struct mbv_report {
    nlohmann::ordered_json document;
    std::string json_text;
};

extern "C" {

const char* mbv_status_name(mbv_status status) {
    switch (status) {
        case MBV_OK: return "OK";
        case MBV_ERR_INVALID_ARGUMENT: return "InvalidArgument";
        case MBV_ERR_NONPOSITIVE_FIELD: return "NonPositiveField";
        case MBV_ERR_UNSORTED_INPUT: return "UnsortedInput";
        case MBV_ERR_EMPTY_BUCKET: return "EmptyBucket";
        case MBV_ERR_DEGENERATE_SERIES: return "DegenerateSeries";
        case MBV_ERR_ZERO_TOTAL_VOLUME: return "ZeroTotalVolume";
        case MBV_ERR_UNKNOWN_SECURITY: return "UnknownSecurity";
        case MBV_ERR_MISMATCHED_LENGTH: return "MismatchedLength";
        case MBV_ERR_EMPTY_LIST: return "EmptyList";
        case MBV_ERR_ZERO_WEIGHT_SUM: return "ZeroWeightSum";
        case MBV_ERR_WEIGHT_SUM: return "WeightSumError";
        case MBV_ERR_DOMAIN: return "DomainError";
        case MBV_ERR_INFEASIBLE_TARGETS: return "InfeasibleTargets";
        case MBV_ERR_IO: return "IoError";
        case MBV_ERR_PARSE: return "ParseError";
        case MBV_ERR_INTERNAL: return "InternalError";
    }
    return "UnknownStatus";
}

const char* mbv_last_error(void) { return g_last_error.c_str(); }

const char* mbv_version(void) { return "1.0.0"; }

void mbv_string_free(char* text) { delete[] text; }

mbv_status mbv_parse_time(const char* text, double* out) {
    if (text == nullptr || out == nullptr) return invalid("text/out is null");
    return guarded([&] { *out = mbv::parse_time_point(text); });
}

mbv_status mbv_parse_duration(const char* text, double* out) {
    if (text == nullptr || out == nullptr) return invalid("text/out is null");
    return guarded([&] { *out = mbv::parse_duration(text); });
}

mbv_status mbv_ticks_create(mbv_ticks** out) {
    if (out == nullptr) return invalid("out is null");
    *out = new mbv_ticks();
    return MBV_OK;
}

void mbv_ticks_free(mbv_ticks* ticks) { delete ticks; }

mbv_status mbv_ticks_append(mbv_ticks* ticks, double time,
                            const char* security, double value,
                            double volume) {
    if (ticks == nullptr || security == nullptr)
        return invalid("ticks/security is null");
    ticks->ticks.push_back({time, security, value, volume});
    return MBV_OK;
}

mbv_status mbv_ticks_load(mbv_ticks** out, const char* path) {
    if (out == nullptr || path == nullptr) return invalid("out/path is null");
    return guarded([&] {
        auto* handle = new mbv_ticks();
        try {
            handle->ticks = mbv::read_ticks(path);
        } catch (...) {
            delete handle;
            throw;
        }
        *out = handle;
    });
}

size_t mbv_ticks_count(const mbv_ticks* ticks) {
    return ticks == nullptr ? 0 : ticks->ticks.size();
}

mbv_status mbv_portfolio_create(mbv_portfolio** out, double composition_time) {
    if (out == nullptr) return invalid("out is null");
    *out = new mbv_portfolio{mbv::PortfolioSpec(composition_time)};
    return MBV_OK;
}

void mbv_portfolio_free(mbv_portfolio* portfolio) { delete portfolio; }

mbv_status mbv_portfolio_add(mbv_portfolio* portfolio, const char* security,
                             double shares, double reference_price) {
    if (portfolio == nullptr || security == nullptr)
        return invalid("portfolio/security is null");
    return guarded(
        [&] { portfolio->spec.add(security, shares, reference_price); });
}

mbv_status mbv_portfolio_load(mbv_portfolio** out, const char* path) {
    if (out == nullptr || path == nullptr) return invalid("out/path is null");
    return guarded([&] {
        *out = new mbv_portfolio{mbv::read_portfolio(path)};
    });
}

size_t mbv_portfolio_size(const mbv_portfolio* portfolio) {
    return portfolio == nullptr ? 0 : portfolio->spec.size();
}

namespace {

// throws mbv::Error; callers wrap with guarded()
void analyze_impl(const std::vector<mbv::TradeTick>& raw_ticks,
                  const mbv::PortfolioSpec& spec, const mbv_window* window,
                  mbv::ReportInputs inputs, mbv_report** out) {
    {
        if (window->buckets < 2)
            mbv::raise(mbv::ErrorCode::degenerate_series,
                       "window needs at least 2 buckets");
        std::vector<mbv::TradeTick> ticks = mbv::validate_ticks(raw_ticks);
        mbv::AveragingWindow grid;
        if (window->whole_series != 0) {
            if (ticks.empty())
                mbv::raise(mbv::ErrorCode::empty_list, "no trades to analyze");
            grid = mbv::AveragingWindow::from_extent(
                ticks.front().time, ticks.back().time, window->buckets);
            inputs.window_mode = "whole_series";
        } else {
            grid.center = window->center;
            grid.half_width = 0.5 * window->width;
            grid.bucket_count = window->buckets;
            grid.validate();
            inputs.window_mode = "explicit";
        }
        inputs.window_center = grid.center;
        inputs.window_width = grid.width();
        inputs.buckets = window->buckets;
        inputs.lenient = window->lenient != 0;

        mbv::AnalyzeOptions options;
        options.mode = window->lenient != 0 ? mbv::AlignMode::lenient
                                            : mbv::AlignMode::strict;
        const mbv::AlignmentResult aligned =
            mbv::align_to_grid(ticks, grid, spec.securities(), options.mode);
        const mbv::AnalysisResult analysis =
            mbv::analyze_aligned(aligned, spec, options);

        auto* report = new mbv_report();
        report->document = mbv::build_report(analysis, inputs);
        report->json_text = mbv::serialize_report(report->document);
        *out = report;
    }
}

}  // namespace

mbv_status mbv_analyze(const mbv_ticks* ticks, const mbv_portfolio* portfolio,
                       const mbv_window* window, mbv_report** out) {
    if (ticks == nullptr || portfolio == nullptr || window == nullptr ||
        out == nullptr)
        return invalid("ticks/portfolio/window/out is null");
    return guarded([&] {
        analyze_impl(ticks->ticks, portfolio->spec, window,
                     mbv::ReportInputs{}, out);
    });
}

mbv_status mbv_analyze_files(const char* trades_path,
                             const char* portfolio_path,
                             const mbv_window* window, mbv_report** out) {
    if (trades_path == nullptr || portfolio_path == nullptr ||
        window == nullptr || out == nullptr)
        return invalid("paths/window/out is null");
    return guarded([&] {
        const std::vector<mbv::TradeTick> ticks = mbv::read_ticks(trades_path);
        const mbv::PortfolioSpec spec = mbv::read_portfolio(portfolio_path);
        mbv::ReportInputs inputs;
        inputs.trades_path = trades_path;
        inputs.portfolio_path = portfolio_path;
        analyze_impl(ticks, spec, window, inputs, out);
    });
}

void mbv_report_free(mbv_report* report) { delete report; }

const char* mbv_report_json(const mbv_report* report) {
    return report == nullptr ? "" : report->json_text.c_str();
}

mbv_status mbv_report_number(const mbv_report* report,
                             const char* json_pointer, double* out) {
    if (report == nullptr || json_pointer == nullptr || out == nullptr)
        return invalid("report/pointer/out is null");
    return guarded([&] {
        nlohmann::ordered_json::json_pointer ptr{std::string(json_pointer)};
        const auto& node = report->document.at(ptr);
        if (!node.is_number())
            mbv::raise(mbv::ErrorCode::parse,
                       std::string("field '") + json_pointer +
                           "' is not a number");
        *out = node.get<double>();
    });
}

mbv_status mbv_report_write(const mbv_report* report, const char* path,
                            const char* format) {
    if (report == nullptr || path == nullptr) return invalid("report/path is null");
    const std::string fmt = format == nullptr ? "json" : format;
    return guarded([&] {
        if (fmt == "json") {
            mbv::write_text_file(path, report->json_text);
        } else if (fmt == "csv") {
            mbv::write_text_file(path, mbv::report_csv(report->document));
        } else {
            mbv::raise(mbv::ErrorCode::invalid_argument,
                       "format must be json or csv, got '" + fmt + "'");
        }
    });
}

mbv_status mbv_sweep_csv(const char* regime, const double* chis,
                         size_t chi_count, double a, double psi0,
                         int32_t buckets, uint64_t seed, char** out_csv) {
    if (regime == nullptr || chis == nullptr || out_csv == nullptr)
        return invalid("regime/chis/out_csv is null");
    if (chi_count == 0) return invalid("empty chi grid");
    return guarded([&] {
        mbv::RegimeKnobs knobs;
        if (!std::isnan(a)) knobs.a = a;
        if (!std::isnan(psi0)) knobs.psi0 = psi0;
        knobs.buckets = buckets;
        knobs.seed = seed;
        const std::vector<double> grid(chis, chis + chi_count);
        const std::vector<mbv::SweepRow> rows =
            mbv::sweep(mbv::regime_preset_from_name(regime), grid, knobs);
        const std::string csv = mbv::sweep_csv(rows);
        char* buffer = new char[csv.size() + 1];
        std::memcpy(buffer, csv.c_str(), csv.size() + 1);
        *out_csv = buffer;
    });
}

mbv_status mbv_generate_files(const char* spec_json_path,
                              const char* trades_out_path,
                              const char* portfolio_out_path) {
    if (spec_json_path == nullptr || trades_out_path == nullptr ||
        portfolio_out_path == nullptr)
        return invalid("paths are null");
    return guarded([&] {
        const std::string text = mbv::read_text_file(spec_json_path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            mbv::raise(mbv::ErrorCode::parse,
                       std::string(spec_json_path) + ": " + e.what());
        }
        mbv::GeneratorSpec spec;
        spec.seed = doc.value("seed", spec.seed);
        spec.securities = doc.value("securities", spec.securities);
        spec.buckets = doc.value("buckets", spec.buckets);
        spec.target_price_cv =
            doc.value("target_price_cv", spec.target_price_cv);
        spec.target_volume_cv =
            doc.value("target_volume_cv", spec.target_volume_cv);
        if (doc.contains("target_corr_a") && !doc["target_corr_a"].is_null())
            spec.target_corr_a = doc["target_corr_a"].get<double>();
        if (doc.contains("volume_common_corr") &&
            !doc["volume_common_corr"].is_null())
            spec.volume_common_corr = doc["volume_common_corr"].get<double>();
        spec.base_price = doc.value("base_price", spec.base_price);
        spec.base_volume = doc.value("base_volume", spec.base_volume);
        if (doc.contains("model")) {
            const std::string model = doc["model"].get<std::string>();
            if (model == "lognormal" || model == "correlated_lognormal") {
                spec.model = mbv::VolumeModel::correlated_lognormal;
            } else if (model == "burst" || model == "volume_burst") {
                spec.model = mbv::VolumeModel::volume_burst;
            } else {
                mbv::raise(mbv::ErrorCode::parse,
                           "unknown model '" + model + "'");
            }
        }
        if (doc.contains("holdings") && !doc["holdings"].is_null())
            spec.holdings_override =
                doc["holdings"].get<std::vector<double>>();
        spec.window_start = doc.value("window_start", spec.window_start);
        spec.bucket_seconds = doc.value("bucket_seconds", spec.bucket_seconds);

        const mbv::GeneratedData data = mbv::generate(spec);
        mbv::write_text_file(trades_out_path, mbv::trades_csv(data));
        mbv::write_text_file(portfolio_out_path,
                             mbv::portfolio_file(data.portfolio));
    });
}

}  // extern "C"
