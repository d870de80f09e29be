// mbv command line front end. Links the C API only.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mbv/mbv.h"

namespace {

int log_level() {
    // 0 = error, 1 = warn, 2 = info, 3 = debug
    const char* env = std::getenv("MBV_LOG");
    if (env == nullptr) return 1;
    const std::string v = env;
    if (v == "error") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 1;
}

void log_info(const std::string& message) {
    if (log_level() >= 2) std::fprintf(stderr, "[mbv] %s\n", message.c_str());
}

int fail(mbv_status status) {
    std::fprintf(stderr, "error: %s: %s\n", mbv_status_name(status),
                 mbv_last_error());
    return status == MBV_OK ? 1 : static_cast<int>(status);
}

double parse_time_flag(const std::string& text) {
    double out = 0.0;
    const mbv_status status = mbv_parse_time(text.c_str(), &out);
    if (status != MBV_OK) {
        std::fprintf(stderr, "error: bad time '%s': %s\n", text.c_str(),
                     mbv_last_error());
        std::exit(static_cast<int>(status));
    }
    return out;
}

double parse_duration_flag(const std::string& text) {
    double out = 0.0;
    const mbv_status status = mbv_parse_duration(text.c_str(), &out);
    if (status != MBV_OK) {
        std::fprintf(stderr, "error: bad duration '%s': %s\n", text.c_str(),
                     mbv_last_error());
        std::exit(static_cast<int>(status));
    }
    return out;
}

int run_analyze(const std::string& trades, const std::string& portfolio,
                const std::string& center, const std::string& width,
                int buckets, bool lenient, const std::string& format,
                const std::string& out_path) {
    mbv_window window{};
    window.buckets = buckets;
    window.lenient = lenient ? 1 : 0;
    if (center.empty() != width.empty()) {
        std::fprintf(stderr,
                     "error: --window-center and --window-width go together\n");
        return 2;
    }
    if (center.empty()) {
        window.whole_series = 1;
    } else {
        window.center = parse_time_flag(center);
        window.width = parse_duration_flag(width);
    }

    mbv_report* report = nullptr;
    const mbv_status status =
        mbv_analyze_files(trades.c_str(), portfolio.c_str(), &window, &report);
    if (status != MBV_OK) return fail(status);

    if (out_path.empty()) {
        std::fputs(mbv_report_json(report), stdout);
    } else {
        const mbv_status write_status =
            mbv_report_write(report, out_path.c_str(), format.c_str());
        if (write_status != MBV_OK) {
            mbv_report_free(report);
            return fail(write_status);
        }
        log_info("report written to " + out_path);
    }

    double theta = 0.0;
    double theta_m = 0.0;
    if (mbv_report_number(report, "/variance/theta_weighted", &theta) == MBV_OK &&
        mbv_report_number(report, "/variance/theta_markowitz", &theta_m) ==
            MBV_OK && !out_path.empty()) {
        std::printf("theta_market_based = %.12g\n", theta);
        std::printf("theta_markowitz    = %.12g\n", theta_m);
        double ratio = 0.0;
        if (mbv_report_number(report, "/divergence/theta_ratio", &ratio) ==
            MBV_OK)
            std::printf("theta_ratio        = %.12g\n", ratio);
    }
    mbv_report_free(report);
    return 0;
}

int run_sweep(const std::string& regime, const std::vector<double>& chis,
              double a, double psi0, int n, std::uint64_t seed,
              const std::string& out_path) {
    char* csv = nullptr;
    const mbv_status status =
        mbv_sweep_csv(regime.c_str(), chis.data(), chis.size(), a, psi0,
                      static_cast<int32_t>(n), seed, &csv);
    if (status != MBV_OK) return fail(status);
    if (out_path.empty()) {
        std::fputs(csv, stdout);
    } else {
        std::FILE* f = std::fopen(out_path.c_str(), "wb");
        if (f == nullptr) {
            mbv_string_free(csv);
            std::fprintf(stderr, "error: cannot write '%s'\n", out_path.c_str());
            return 1;
        }
        std::fputs(csv, f);
        std::fclose(f);
        log_info("sweep table written to " + out_path);
    }
    mbv_string_free(csv);
    return 0;
}

int run_generate(const std::string& spec_path, const std::string& out_path,
                 std::string portfolio_out) {
    if (portfolio_out.empty()) portfolio_out = out_path + ".portfolio";
    const mbv_status status = mbv_generate_files(
        spec_path.c_str(), out_path.c_str(), portfolio_out.c_str());
    if (status != MBV_OK) return fail(status);
    std::printf("trades    -> %s\nportfolio -> %s\n", out_path.c_str(),
                portfolio_out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"market-based portfolio variance analytics"};
    app.set_version_flag("--version", mbv_version());
    app.require_subcommand(1);

    // analyze
    std::string trades, portfolio, center, width, format = "json", out_path;
    int buckets = 0;
    bool lenient = false;
    CLI::App* analyze =
        app.add_subcommand("analyze", "run the full variance pipeline");
    analyze->add_option("--trades", trades, "trades CSV or JSONL file")
        ->required();
    analyze->add_option("--portfolio", portfolio, "portfolio composition file")
        ->required();
    analyze->add_option("--window-center", center,
                        "window center (epoch seconds or ISO-8601); omit "
                        "together with --window-width to span all trades");
    analyze->add_option("--window-width", width,
                        "window width (seconds, or with s/m/h/d suffix)");
    analyze->add_option("--buckets", buckets, "bucket count N (>= 2)")
        ->required();
    analyze->add_flag("--lenient", lenient,
                      "merge buckets without trades into their left neighbor");
    analyze->add_option("--format", format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    analyze->add_option("--out", out_path,
                        "report output path (stdout JSON when omitted)");

    // sweep
    std::string regime;
    std::vector<double> chis;
    double a = std::numeric_limits<double>::quiet_NaN();
    double psi0 = std::numeric_limits<double>::quiet_NaN();
    int n = 10000;
    std::uint64_t seed = 1;
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "chi sweep over synthetic data for one regime");
    sweep->add_option("--regime", regime, "HIGH_PSI0, LOW_PSI0 or ZERO_COV")
        ->required();
    sweep->add_option("--chi", chis, "chi grid values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--a", a, "value-volume correlation target override");
    sweep->add_option("--psi0", psi0, "price CV target override");
    sweep->add_option("--n", n, "buckets per synthetic series");
    sweep->add_option("--seed", seed, "generator seed");
    sweep->add_option("--out", sweep_out, "CSV output path (stdout if omitted)");

    // generate
    std::string spec_path, gen_out, gen_portfolio_out;
    CLI::App* generate = app.add_subcommand(
        "generate", "emit synthetic trades from a generator spec");
    generate->add_option("--spec", spec_path, "generator spec JSON file")
        ->required();
    generate->add_option("--out", gen_out, "trades CSV output path")
        ->required();
    generate->add_option("--portfolio-out", gen_portfolio_out,
                         "portfolio file output path (default <out>.portfolio)");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed())
        return run_analyze(trades, portfolio, center, width, buckets, lenient,
                           format, out_path);
    if (sweep->parsed())
        return run_sweep(regime, chis, a, psi0, n, seed, sweep_out);
    if (generate->parsed())
        return run_generate(spec_path, gen_out, gen_portfolio_out);
    return 2;
}
