#pragma once

#include <string>
#include <vector>

#include "core/synthetic.hpp"
#include "core/types.hpp"

namespace mbv {

// Epoch seconds from either a plain number or an ISO-8601 timestamp
// ("YYYY-MM-DD HH:MM:SS[.frac][Z]", 'T' or space separator, treated as UTC).
double parse_time_point(const std::string& text);

// Seconds from a plain number or a number with an s/m/h/d suffix.
double parse_duration(const std::string& text);

// Trades from CSV (header `time,security,value,volume` or
// `time,security,price,volume`) or JSONL (one object per line, same keys).
// The format is sniffed from the content; timestamps must be uniform in
// style within one file. Ticks are returned unvalidated.
std::vector<TradeTick> read_ticks(const std::string& path);

// Portfolio composition file: `t0: <time>` plus one `SECURITY: shares price`
// line per holding; '#' starts a comment.
PortfolioSpec read_portfolio(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// One trade per bucket per security, at the bucket midpoint, in the CSV
// tick format; re-aligning on the same window reproduces the series.
std::string trades_csv(const GeneratedData& data);
std::string portfolio_file(const PortfolioSpec& spec);

std::string format_double17(double value);

}  // namespace mbv
