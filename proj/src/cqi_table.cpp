#include "hsmcast/cqi_table.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hsmcast/errors.hpp"
#include "text_util.hpp"

// Generated from data/cqi_category10.csv at configure time.
#include "bundled_cqi_table.inc"

namespace hsmcast {

namespace detail {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

std::string_view to_string(Modulation m) noexcept
{
    return m == Modulation::Qpsk ? "QPSK" : "16QAM";
}

std::optional<Modulation> parse_modulation(std::string_view s) noexcept
{
    if (s == "QPSK") return Modulation::Qpsk;
    if (s == "16QAM") return Modulation::Qam16;
    return std::nullopt;
}

std::int64_t CqiEntry::rate_bps() const noexcept
{
    return std::llround(data_rate_kbps * 1000.0);
}

CqiTable::CqiTable(std::vector<CqiEntry> entries) : entries_(std::move(entries)) {}

const CqiEntry& CqiTable::lookup(int cqi) const
{
    if (cqi < 1 || cqi > n_cqi()) {
        throw std::out_of_range("CQI level " + std::to_string(cqi) + " outside [1, " +
                                std::to_string(n_cqi()) + "]");
    }
    return entries_[static_cast<std::size_t>(cqi - 1)];
}

CqiTable CqiTable::truncated(int n) const
{
    if (n < 1 || n > n_cqi()) throw std::out_of_range("truncation length out of range");
    return CqiTable({entries_.begin(), entries_.begin() + n});
}

bool ValidationReport::flags_row(std::size_t row) const noexcept
{
    for (const auto& v : violations) {
        if (v.row == row) return true;
    }
    return false;
}

std::string ValidationReport::summary() const
{
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += "row " + std::to_string(v.row) + ": " + v.message;
    }
    return out;
}

ValidationReport validate(const CqiTable& table)
{
    ValidationReport report;
    const auto& rows = table.entries();
    auto flag = [&](std::size_t row, std::string msg) {
        report.violations.push_back({row, std::move(msg)});
    };

    if (rows.empty()) flag(0, "table is empty");
    if (rows.size() > 30) flag(rows.size(), "more than 30 CQI levels");

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& e = rows[i];
        const std::size_t row = i + 1;
        if (e.cqi != static_cast<int>(row)) {
            flag(row, "level " + std::to_string(e.cqi) + " where " + std::to_string(row) +
                          " expected (levels must be 1..n, ascending, no duplicates)");
        }
        if (e.num_codes < 1 || e.num_codes > kMaxCodes) flag(row, "code count outside [1, 15]");
        if (e.transport_block_size <= 0) flag(row, "non-positive transport block size");
        if (std::abs(e.data_rate_kbps - e.transport_block_size / 2.0) > kRateTolerance_kbps) {
            flag(row, "data rate does not match TBS / 2 ms");
        }
        if (e.num_codes > 0) {
            const double expected =
                static_cast<double>(e.transport_block_size) / (e.num_codes * bits_per_code(e.modulation));
            if (std::abs(e.code_rate - expected) > kCodeRateTolerance) {
                flag(row, "code rate does not match TBS / (codes * bits per code)");
            }
        }
        if (i > 0) {
            if (!(e.data_rate_kbps > rows[i - 1].data_rate_kbps)) flag(row, "data rate not strictly increasing");
            if (e.num_codes < rows[i - 1].num_codes) flag(row, "code count decreases");
        }
    }
    return report;
}

CqiTable parse_table(std::string_view csv, const std::string& source)
{
    const auto all = detail::lines(csv);
    std::vector<CqiEntry> entries;
    bool header_seen = false;

    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto line = detail::trim(all[i]);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "cqi,modulation,tbs,codes,code_rate,data_rate_kbps") {
                throw ParseError(source, lineno, "unexpected header '" + std::string(line) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto f = detail::split(line, ',');
        if (f.size() != 6) throw ParseError(source, lineno, "expected 6 fields");

        CqiEntry e;
        const auto cqi = detail::parse_number<int>(f[0]);
        const auto mod = parse_modulation(f[1]);
        const auto tbs = detail::parse_number<int>(f[2]);
        const auto codes = detail::parse_number<int>(f[3]);
        const auto code_rate = detail::parse_number<double>(f[4]);
        const auto rate = detail::parse_number<double>(f[5]);
        if (!cqi) throw ParseError(source, lineno, "bad cqi field");
        if (!mod) throw ParseError(source, lineno, "modulation must be QPSK or 16QAM");
        if (!tbs) throw ParseError(source, lineno, "bad tbs field");
        if (!codes) throw ParseError(source, lineno, "bad codes field");
        if (!code_rate) throw ParseError(source, lineno, "bad code_rate field");
        if (!rate) throw ParseError(source, lineno, "bad data_rate_kbps field");
        e.cqi = *cqi;
        e.modulation = *mod;
        e.transport_block_size = *tbs;
        e.num_codes = *codes;
        e.code_rate = *code_rate;
        e.data_rate_kbps = *rate;
        entries.push_back(e);
    }
    if (!header_seen) throw ParseError(source, all.size() + 1, "empty table file");
    if (entries.empty()) throw ParseError(source, all.size() + 1, "table has no rows");

    CqiTable table(std::move(entries));
    if (const auto report = validate(table); !report.ok()) {
        throw ValidationError(source + ": " + report.summary());
    }
    return table;
}

CqiTable load_table(const std::optional<std::filesystem::path>& path)
{
    if (!path || path->empty()) return bundled_table();
    return parse_table(detail::read_file(path->string()), path->string());
}

std::string_view bundled_table_csv() noexcept { return kBundledCqiTableCsv; }

const CqiTable& bundled_table()
{
    static const CqiTable table = parse_table(kBundledCqiTableCsv, "bundled Category 10 table");
    return table;
}

std::string to_csv(const CqiTable& table)
{
    std::ostringstream out;
    out << "cqi,modulation,tbs,codes,code_rate,data_rate_kbps\n";
    out.setf(std::ios::fixed);
    for (const auto& e : table.entries()) {
        out.precision(4);
        out << e.cqi << ',' << to_string(e.modulation) << ',' << e.transport_block_size << ','
            << e.num_codes << ',' << e.code_rate << ',';
        out.precision(2);
        out << e.data_rate_kbps << '\n';
    }
    return out.str();
}

}  // namespace hsmcast
