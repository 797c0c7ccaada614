#include <gtest/gtest.h>

#include <locale>
#include <sstream>

#include "rectent/error.hpp"
#include "rectent/table.hpp"

using namespace rectent;

TEST(Table, NumberFormatting) {
    EXPECT_EQ(format_number(1.8378770664093453), "1.83787706641");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(5e-05), "5e-05");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(1.0 / 0.0), "inf");
}

namespace {

struct CommaDecimal : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
};

}  // namespace

TEST(Table, CsvIgnoresLocale) {
    Table t({"a", "b", "c"});
    t.add_row({0.5, std::int64_t{3}, std::string("x")});
    std::ostringstream os;
    os.imbue(std::locale(std::locale::classic(), new CommaDecimal));
    t.write_csv(os);
    EXPECT_EQ(os.str(), "a,b,c\n0.5,3,x\n");
}

TEST(Table, TextAlignsColumns) {
    Table t({"name", "v"});
    t.add_row({std::string("long-name"), 1.0});
    std::ostringstream os;
    t.write_text(os);
    EXPECT_EQ(os.str(), "name       v\nlong-name  1\n");
    EXPECT_THROW(t.add_row({1.0}), InvalidArgument);
}
