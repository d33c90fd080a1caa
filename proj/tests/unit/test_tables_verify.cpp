#include "sgcalc/tables.hpp"
#include "sgcalc/verify.hpp"

#include <gtest/gtest.h>

using namespace sgcalc;

namespace {

std::string cell(const TextTable& t, std::size_t row, const std::string& column) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == column) return t.rows.at(row).at(i);
    throw std::out_of_range(column);
}

}  // namespace

TEST(Tables, PublishedSpotValues) {
    EXPECT_EQ(cell(run_table("2.1"), 20, "beta_j"), "-0.2588497599e-43");
    EXPECT_NEAR(std::stod(cell(run_table("6.3"), 20, "(-lambda_2^D)^j T_j")), 2.610901182, 1e-8);
    TextTable t61 = run_table("6.1");
    EXPECT_EQ(t61.rows.back()[0], "-10");
    EXPECT_EQ(t61.rows.back().back(), "-1.0000000000");
}

TEST(Tables, Table52StructuralFacts) {
    TextTable t = run_table("5.2");
    EXPECT_EQ(t.rows[0], (std::vector<std::string>{"0", "0", "1.000000000", "2.000000000"}));
    for (const auto& r : t.rows)
        if (r[0] == r[1]) {
            EXPECT_EQ(r[2], "1.000000000");
        }
}

TEST(Tables, CsvIsRfc4180) {
    TextTable t{"x", "t", {"a", "b,c"}, {{"1", "say \"hi\""}}, {}};
    EXPECT_EQ(to_csv(t), "a,\"b,c\"\r\n1,\"say \"\"hi\"\"\"\r\n");
    EXPECT_THROW(run_table("9.9"), std::invalid_argument);
}

TEST(Tables, DeterministicOutput) { EXPECT_EQ(to_csv(run_table("2.2")), to_csv(run_table("2.2"))); }

TEST(Verify, ReportSemantics) {
    SuiteReport r;
    r.evidence("s", "conjecture", false, "counterexample");
    EXPECT_TRUE(r.ok());
    r.add("s", "check", false, "w");
    EXPECT_FALSE(r.ok());
    auto j = to_json(r);
    EXPECT_EQ(j[1]["witness"], "w");
    EXPECT_EQ(j[0]["conjectural"], true);
    EXPECT_THROW(run_verify("nope"), std::invalid_argument);
}

TEST(Verify, Suites) {
    for (const std::string s : {"identities", "laplacian", "matching", "spectral", "bridge"}) EXPECT_TRUE(run_verify(s).ok()) << s;
    SuiteReport p = run_verify("positivity");
    for (const auto& c : p.checks) {
        EXPECT_TRUE(c.conjectural);
        EXPECT_EQ(c.status, CheckStatus::evidence) << c.id;
    }
}
