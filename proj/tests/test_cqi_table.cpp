#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hsmcast/cqi_table.hpp"
#include "hsmcast/errors.hpp"

namespace hsmcast {
namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content)
{
    const auto path = std::filesystem::temp_directory_path() / ("hsmcast_test_" + name);
    std::ofstream(path) << content;
    return path;
}

std::string bundled_with(int row, const std::string& replacement)
{
    std::string csv(bundled_table_csv());
    std::size_t pos = 0;
    for (int i = 0; i < row; ++i) pos = csv.find('\n', pos) + 1;  // skip header + rows before
    const auto end = csv.find('\n', pos);
    return csv.replace(pos, end - pos, replacement);
}

TEST(CqiTable, BundledRowsMatchReferenceTable)
{
    const auto& t = bundled_table();
    ASSERT_EQ(t.n_cqi(), 30);

    const auto& r1 = t.lookup(1);
    EXPECT_EQ(r1.modulation, Modulation::Qpsk);
    EXPECT_EQ(r1.transport_block_size, 137);
    EXPECT_EQ(r1.num_codes, 1);
    EXPECT_DOUBLE_EQ(r1.data_rate_kbps, 68.50);

    const auto& r16 = t.lookup(16);
    EXPECT_EQ(r16.modulation, Modulation::Qam16);
    EXPECT_EQ(r16.transport_block_size, 3565);
    EXPECT_EQ(r16.num_codes, 5);
    EXPECT_DOUBLE_EQ(r16.data_rate_kbps, 1782.50);

    const auto& r30 = t.lookup(30);
    EXPECT_EQ(r30.modulation, Modulation::Qam16);
    EXPECT_EQ(r30.transport_block_size, 25558);
    EXPECT_EQ(r30.num_codes, 15);
    EXPECT_DOUBLE_EQ(r30.data_rate_kbps, 12779.00);
}

TEST(CqiTable, LookupOutOfRangeThrows)
{
    EXPECT_THROW(bundled_table().lookup(0), std::out_of_range);
    EXPECT_THROW(bundled_table().lookup(31), std::out_of_range);
}

TEST(CqiTable, BundledIdentitiesHold)
{
    const auto& t = bundled_table();
    EXPECT_TRUE(validate(t).ok()) << validate(t).summary();
    for (const auto& e : t.entries()) {
        EXPECT_LE(std::abs(e.data_rate_kbps - e.transport_block_size / 2.0), 0.5) << "row " << e.cqi;
        const double cr = static_cast<double>(e.transport_block_size) / (e.num_codes * bits_per_code(e.modulation));
        EXPECT_LE(std::abs(e.code_rate - cr), 0.0005) << "row " << e.cqi;
        EXPECT_EQ(e.modulation, e.cqi <= 15 ? Modulation::Qpsk : Modulation::Qam16);
    }
    EXPECT_NEAR(t.lookup(1).code_rate, 137.0 / 960.0, 0.0005);
    EXPECT_NEAR(t.lookup(16).code_rate, 3565.0 / 9600.0, 0.0005);
}

TEST(CqiTable, ValidateFlagsCorruptedRate)
{
    auto rows = bundled_table().entries();
    rows[4].data_rate_kbps = 999.0;
    const auto report = validate(CqiTable(rows));
    EXPECT_FALSE(report.ok());
    EXPECT_TRUE(report.flags_row(5));
    EXPECT_FALSE(report.flags_row(4));
}

TEST(CqiTable, ValidateFlagsDecreasingCodes)
{
    auto rows = bundled_table().entries();
    rows[7].num_codes = 1;  // row 8 drops below row 7's 2 codes
    rows[7].code_rate = rows[7].transport_block_size / 960.0;
    const auto report = validate(CqiTable(rows));
    EXPECT_FALSE(report.ok());
    EXPECT_TRUE(report.flags_row(8));
    EXPECT_NE(report.summary().find("code count decreases"), std::string::npos);
}

TEST(CqiTable, LoadBundledWhenNoPath)
{
    const auto t = load_table();
    EXPECT_EQ(t.n_cqi(), 30);
    EXPECT_EQ(to_csv(t), to_csv(bundled_table()));
}

TEST(CqiTable, LoadFromFileRoundTrips)
{
    const auto path = write_temp("table.csv", to_csv(bundled_table()));
    const auto t = load_table(path);
    EXPECT_EQ(to_csv(t), to_csv(bundled_table()));
}

TEST(CqiTable, EmptyFileIsParseError)
{
    const auto path = write_temp("empty.csv", "");
    EXPECT_THROW(load_table(path), ParseError);
}

TEST(CqiTable, BadFieldReportsLineNumber)
{
    const auto csv = bundled_with(3, "3,QPSK,abc,1,0.2427,116.50");
    try {
        parse_table(csv, "t.csv");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(CqiTable, DuplicateLevelIsValidationError)
{
    const auto csv = bundled_with(3, "2,QPSK,233,1,0.2427,116.50");
    EXPECT_THROW(parse_table(csv), ValidationError);
}

TEST(CqiTable, UnknownModulationRejected)
{
    const auto csv = bundled_with(1, "1,8PSK,137,1,0.1427,68.50");
    EXPECT_THROW(parse_table(csv), ParseError);
}

TEST(CqiTable, TruncatedKeepsPrefix)
{
    const auto t = bundled_table().truncated(12);
    EXPECT_EQ(t.n_cqi(), 12);
    EXPECT_TRUE(validate(t).ok());
    EXPECT_DOUBLE_EQ(t.rate_kbps(12), 871.0);
}

}  // namespace
}  // namespace hsmcast
