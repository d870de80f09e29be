#include "core/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "core/errors.hpp"

namespace mbv {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& text, double* out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return false;
    *out = v;
    return true;
}

// days since 1970-01-01 for a civil date (Gregorian, proleptic)
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_iso8601(const std::string& text, double* out) {
    // YYYY-MM-DD[T ]HH:MM:SS[.frac][Z]
    const std::string t = trim(text);
    if (t.size() < 19) return false;
    auto digit = [&](std::size_t i) {
        return std::isdigit(static_cast<unsigned char>(t[i])) != 0;
    };
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u,
                          17u, 18u})
        if (!digit(i)) return false;
    if (t[4] != '-' || t[7] != '-' || (t[10] != 'T' && t[10] != ' ') ||
        t[13] != ':' || t[16] != ':')
        return false;
    const int year = std::stoi(t.substr(0, 4));
    const int month = std::stoi(t.substr(5, 2));
    const int day = std::stoi(t.substr(8, 2));
    const int hour = std::stoi(t.substr(11, 2));
    const int minute = std::stoi(t.substr(14, 2));
    const int second = std::stoi(t.substr(17, 2));
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
        minute > 59 || second > 60)
        return false;
    double frac = 0.0;
    std::size_t pos = 19;
    if (pos < t.size() && t[pos] == '.') {
        std::size_t end = pos + 1;
        while (end < t.size() && digit(end)) ++end;
        if (end == pos + 1) return false;
        frac = std::strtod(t.substr(pos, end - pos).c_str(), nullptr);
        pos = end;
    }
    if (pos < t.size()) {
        if (t[pos] != 'Z' || pos + 1 != t.size()) return false;
    }
    const std::int64_t days =
        days_from_civil(year, static_cast<unsigned>(month),
                        static_cast<unsigned>(day));
    *out = static_cast<double>(days) * 86400.0 + hour * 3600.0 +
           minute * 60.0 + second + frac;
    return true;
}

enum class TimeStyle { unknown, epoch, iso };

double parse_time_with_style(const std::string& text, TimeStyle* style) {
    double v = 0.0;
    if (*style != TimeStyle::iso && parse_number(text, &v)) {
        *style = TimeStyle::epoch;
        return v;
    }
    if (*style != TimeStyle::epoch && parse_iso8601(text, &v)) {
        *style = TimeStyle::iso;
        return v;
    }
    raise(ErrorCode::parse, "cannot parse time '" + text + "'" +
                                (*style == TimeStyle::epoch
                                     ? " (file uses epoch-second times)"
                                 : *style == TimeStyle::iso
                                     ? " (file uses ISO-8601 times)"
                                     : ""));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<TradeTick> read_ticks_csv(const std::string& path,
                                      const std::string& content) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line))
        raise(ErrorCode::parse, path + ": empty trades file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() != 4 || lower(header[0]) != "time" ||
        lower(header[1]) != "security" || lower(header[3]) != "volume" ||
        (lower(header[2]) != "value" && lower(header[2]) != "price"))
        raise(ErrorCode::parse,
              path + ": header must be time,security,value|price,volume");
    const bool quoted_price = lower(header[2]) == "price";

    std::vector<TradeTick> ticks;
    TimeStyle style = TimeStyle::unknown;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 4)
            raise(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                        ": expected 4 fields");
        TradeTick t;
        t.time = parse_time_with_style(fields[0], &style);
        t.security = fields[1];
        double amount = 0.0;
        double volume = 0.0;
        if (!parse_number(fields[2], &amount) ||
            !parse_number(fields[3], &volume))
            raise(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                        ": bad numeric field");
        t.volume = volume;
        t.value = quoted_price ? amount * volume : amount;
        ticks.push_back(std::move(t));
    }
    return ticks;
}

std::vector<TradeTick> read_ticks_jsonl(const std::string& path,
                                        const std::string& content) {
    std::istringstream in(content);
    std::string line;
    std::vector<TradeTick> ticks;
    TimeStyle style = TimeStyle::unknown;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::parse,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object())
            raise(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                        ": expected a JSON object");
        TradeTick t;
        if (!obj.contains("time") || !obj.contains("security") ||
            !obj.contains("volume") ||
            (!obj.contains("value") && !obj.contains("price")))
            raise(ErrorCode::parse,
                  path + ":" + std::to_string(line_no) +
                      ": need time, security, volume and value|price");
        if (obj["time"].is_number()) {
            if (style == TimeStyle::iso)
                raise(ErrorCode::parse, path + ": mixed time styles");
            style = TimeStyle::epoch;
            t.time = obj["time"].get<double>();
        } else {
            t.time = parse_time_with_style(obj["time"].get<std::string>(), &style);
        }
        t.security = obj["security"].get<std::string>();
        t.volume = obj["volume"].get<double>();
        t.value = obj.contains("value")
                      ? obj["value"].get<double>()
                      : obj["price"].get<double>() * t.volume;
        ticks.push_back(std::move(t));
    }
    return ticks;
}

}  // namespace

double parse_time_point(const std::string& text) {
    TimeStyle style = TimeStyle::unknown;
    return parse_time_with_style(text, &style);
}

double parse_duration(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) raise(ErrorCode::parse, "empty duration");
    double scale = 1.0;
    std::string number = t;
    switch (t.back()) {
        case 's': scale = 1.0; number = t.substr(0, t.size() - 1); break;
        case 'm': scale = 60.0; number = t.substr(0, t.size() - 1); break;
        case 'h': scale = 3600.0; number = t.substr(0, t.size() - 1); break;
        case 'd': scale = 86400.0; number = t.substr(0, t.size() - 1); break;
        default: break;
    }
    double v = 0.0;
    if (!parse_number(number, &v))
        raise(ErrorCode::parse, "cannot parse duration '" + text + "'");
    return v * scale;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) raise(ErrorCode::io, "error reading '" + path + "'");
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::io, "cannot open '" + path + "' for writing");
    out << content;
    if (!out) raise(ErrorCode::io, "error writing '" + path + "'");
}

std::vector<TradeTick> read_ticks(const std::string& path) {
    const std::string content = read_text_file(path);
    const std::size_t first = content.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        raise(ErrorCode::parse, path + ": empty trades file");
    if (content[first] == '{') return read_ticks_jsonl(path, content);
    return read_ticks_csv(path, content);
}

PortfolioSpec read_portfolio(const std::string& path) {
    const std::string content = read_text_file(path);
    std::istringstream in(content);
    std::string line;
    bool have_t0 = false;
    double t0 = 0.0;
    std::vector<std::tuple<std::string, double, double>> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            raise(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                        ": expected 'key: value'");
        const std::string key = trim(line.substr(0, colon));
        const std::string rest = trim(line.substr(colon + 1));
        if (key == "t0" || key == "composition_time") {
            t0 = parse_time_point(rest);
            have_t0 = true;
            continue;
        }
        std::istringstream fields(rest);
        double shares = 0.0;
        double price = 0.0;
        if (!(fields >> shares >> price))
            raise(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                        ": expected '<shares> <price>'");
        std::string extra;
        if (fields >> extra)
            raise(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                        ": trailing content '" + extra + "'");
        rows.emplace_back(key, shares, price);
    }
    if (!have_t0)
        raise(ErrorCode::parse, path + ": missing 't0:' line");
    if (rows.empty())
        raise(ErrorCode::parse, path + ": no holdings");
    PortfolioSpec spec(t0);
    for (const auto& [security, shares, price] : rows)
        spec.add(security, shares, price);
    spec.validate();
    return spec;
}

std::string format_double17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string trades_csv(const GeneratedData& data) {
    std::string out = "time,security,value,volume\n";
    const int n = data.spec.buckets;
    for (int i = 0; i < n; ++i) {
        const double time = data.spec.window_start +
                            (static_cast<double>(i) + 0.5) *
                                data.spec.bucket_seconds;
        for (const AlignedSeries& s : data.series) {
            const Bucket& b = s.buckets[static_cast<std::size_t>(i)];
            out += format_double17(time) + ',' + s.security + ',' +
                   format_double17(b.value) + ',' + format_double17(b.volume) +
                   '\n';
        }
    }
    return out;
}

std::string portfolio_file(const PortfolioSpec& spec) {
    std::string out =
        "t0: " + format_double17(spec.composition_time()) + '\n';
    for (std::size_t j = 0; j < spec.size(); ++j)
        out += spec.securities()[j] + ": " +
               format_double17(spec.holdings()[j]) + ' ' +
               format_double17(spec.reference_prices()[j]) + '\n';
    return out;
}

}  // namespace mbv
