#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsmcast {

enum class Modulation { Qpsk, Qam16 };

/// Coded bits carried by one SF16 channelization code in one 2 ms TTI.
constexpr int bits_per_code(Modulation m) noexcept { return m == Modulation::Qpsk ? 960 : 1920; }

std::string_view to_string(Modulation m) noexcept;
std::optional<Modulation> parse_modulation(std::string_view s) noexcept;

/// One row of a UE-category CQI mapping table.
struct CqiEntry {
    int cqi = 0;
    Modulation modulation = Modulation::Qpsk;
    int transport_block_size = 0;  // bits per TTI
    int num_codes = 0;
    double code_rate = 0.0;
    double data_rate_kbps = 0.0;

    /// Data rate in integer bit/s. Optimizer objectives are summed in this unit so
    /// that different evaluation orders give bit-identical totals.
    std::int64_t rate_bps() const noexcept;
};

/// Ordered CQI levels 1..n_cqi. Construction does not validate; use validate().
class CqiTable {
public:
    CqiTable() = default;
    explicit CqiTable(std::vector<CqiEntry> entries);

    /// Row for a 1-based level. Throws std::out_of_range outside [1, n_cqi].
    const CqiEntry& lookup(int cqi) const;

    int n_cqi() const noexcept { return static_cast<int>(entries_.size()); }
    const std::vector<CqiEntry>& entries() const noexcept { return entries_; }

    double rate_kbps(int cqi) const { return lookup(cqi).data_rate_kbps; }
    std::int64_t rate_bps(int cqi) const { return lookup(cqi).rate_bps(); }
    int codes(int cqi) const { return lookup(cqi).num_codes; }

    /// Table restricted to levels 1..n. Used for desk-scale optimizer checks.
    CqiTable truncated(int n) const;

private:
    std::vector<CqiEntry> entries_;
};

struct TableViolation {
    std::size_t row = 0;  // 1-based row position in the table
    std::string message;
};

struct ValidationReport {
    std::vector<TableViolation> violations;

    bool ok() const noexcept { return violations.empty(); }
    bool flags_row(std::size_t row) const noexcept;
    std::string summary() const;
};

inline constexpr double kRateTolerance_kbps = 0.5;
inline constexpr double kCodeRateTolerance = 0.0005;
inline constexpr int kMaxCodes = 15;

/// Checks the per-row rate and code-rate identities against TBS, plus level
/// numbering and monotonicity across rows.
ValidationReport validate(const CqiTable& table);

/// Parses the `cqi,modulation,tbs,codes,code_rate,data_rate_kbps` CSV schema.
/// `source` names the input in error messages. Throws ParseError or
/// ValidationError.
CqiTable parse_table(std::string_view csv, const std::string& source = "<memory>");

/// Loads a table from disk, or the bundled Category 10 table when `path` is empty.
CqiTable load_table(const std::optional<std::filesystem::path>& path = std::nullopt);

/// Category 10 UE table shipped with the library.
const CqiTable& bundled_table();

/// The CSV text of the bundled table.
std::string_view bundled_table_csv() noexcept;

std::string to_csv(const CqiTable& table);

}  // namespace hsmcast
