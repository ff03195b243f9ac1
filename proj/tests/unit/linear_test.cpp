#include <gtest/gtest.h>

#include "helpers.hpp"
#include "semedit/linear_input.hpp"
#include "xml_check.hpp"

using namespace semedit;
using namespace semedit::testing;

namespace {

std::string legacy(const std::string& keys)
{
    return content(typed(keys, true));
}

std::string math(const std::string& body)
{
    return "<math>" + body + "</math>";
}

} // namespace

TEST(Linear, SinIsRecognizedFromLetters)
{
    EXPECT_EQ(legacy("y=sinx"), math("<apply><eq/><ci>y</ci><apply><sin/><ci>x</ci></apply></apply>"));
}

TEST(Linear, RepeatedLetterBecomesPower)
{
    EXPECT_EQ(legacy("y=2aab"), math("<apply><eq/><ci>y</ci><apply><times/><cn>2</cn><apply><power/><ci>a</ci>"
                                     "<cn>2</cn></apply><ci>b</ci></apply></apply>"));
    EXPECT_EQ(legacy("aa"), math("<apply><power/><ci>a</ci><cn>2</cn></apply>"));
    EXPECT_EQ(legacy("ab"), math("<apply><times/><ci>a</ci><ci>b</ci></apply>"));
}

TEST(Linear, FractionBindsTighterThanPlus)
{
    EXPECT_EQ(legacy("y=1/x+1"), math("<apply><eq/><ci>y</ci><apply><plus/><apply><divide/><cn>1</cn><ci>x</ci>"
                                      "</apply><cn>1</cn></apply></apply>"));
}

TEST(Linear, BasicModeKeepsTypingInDenominator)
{
    EXPECT_EQ(content(typed("y=1/x+1")), math("<apply><eq/><ci>y</ci><apply><divide/><cn>1</cn><apply><plus/>"
                                              "<ci>x</ci><cn>1</cn></apply></apply></apply>"));
}

TEST(Linear, PlusWidensOutOfExponent)
{
    EXPECT_EQ(legacy("x^2+1"), math("<apply><plus/><apply><power/><ci>x</ci><cn>2</cn></apply><cn>1</cn></apply>"));
}

TEST(Linear, PowerDoesNotWidenOutOfDenominator)
{
    EXPECT_EQ(legacy("1/x^2"), math("<apply><divide/><cn>1</cn><apply><power/><ci>x</ci><cn>2</cn></apply></apply>"));
}

TEST(Linear, PowerIsRightAssociative)
{
    EXPECT_EQ(legacy("2^3^2"), math("<apply><power/><cn>2</cn><apply><power/><cn>3</cn><cn>2</cn></apply></apply>"));
}

TEST(Linear, DivideIsLeftAssociative)
{
    EXPECT_EQ(legacy("1/2/3"), math("<apply><divide/><apply><divide/><cn>1</cn><cn>2</cn></apply><cn>3</cn></apply>"));
}

TEST(Linear, UnaryMinusBindsLooserThanPower)
{
    EXPECT_EQ(legacy("-x^2"), math("<apply><minus/><apply><power/><ci>x</ci><cn>2</cn></apply></apply>"));
}

TEST(Linear, FunctionAppliesBeforePlus)
{
    EXPECT_EQ(legacy("sinx+1"), math("<apply><plus/><apply><sin/><ci>x</ci></apply><cn>1</cn></apply>"));
}

TEST(Linear, PendingTokenWhileFunctionPrefix)
{
    Session s = typed("si", true);
    EXPECT_EQ(s.pending_token(), "si");
    key(s, "n");
    key(s, "x");
    EXPECT_EQ(s.pending_token(), "");
    Session b = typed("si");
    EXPECT_EQ(b.pending_token(), "");
}

TEST(Linear, LetterFactors)
{
    EXPECT_EQ(letter_factors("aab"), (std::vector<LetterFactor>{{"a", 2}, {"b", 1}}));
    EXPECT_EQ(letter_factors("aba"), (std::vector<LetterFactor>{{"a", 1}, {"b", 1}, {"a", 1}}));
    EXPECT_TRUE(letter_factors("").empty());
}

TEST(Linear, ClassifyLetterRun)
{
    const TemplateRegistry& reg = TemplateRegistry::builtin();
    LetterRunReading sin = classify_letter_run("sin", reg);
    EXPECT_TRUE(sin.is_function);
    EXPECT_EQ(sin.function, "sin");
    LetterRunReading prod = classify_letter_run("xxy", reg);
    EXPECT_FALSE(prod.is_function);
    EXPECT_EQ(prod.factors, (std::vector<LetterFactor>{{"x", 2}, {"y", 1}}));
    EXPECT_FALSE(classify_letter_run("sinx", reg).is_function);
}

TEST(Linear, PrecedenceTableFromRegistry)
{
    PrecedenceTable t = PrecedenceTable::from_registry(TemplateRegistry::builtin());
    EXPECT_EQ(t.at("=").level, 1);
    EXPECT_EQ(t.at("<").level, 2);
    EXPECT_EQ(t.at("+").level, 3);
    EXPECT_EQ(t.at("×").level, 4);
    EXPECT_EQ(t.at(std::string(kInvisibleTimes)).level, 4);
    EXPECT_EQ(t.at("unary-").level, 5);
    EXPECT_EQ(t.at("^").level, 6);
    EXPECT_EQ(t.at("^").assoc, Assoc::Right);
    EXPECT_EQ(t.at("apply").level, 7);
    EXPECT_FALSE(t.find("@").has_value());
}

TEST(Linear, WidenLeavesExponentForPlus)
{
    Session s = typed("x^2", true);
    Document d = s.document();
    CaretPosition inside = d.caret();
    CaretPosition out = precedence_widen(d, 3, Assoc::Left, s.registry());
    EXPECT_LT(out.path.size(), inside.path.size());
    Document e = s.document();
    EXPECT_EQ(precedence_widen(e, 6, Assoc::Right, s.registry()), inside);
}

TEST(Linear, WidenStopsAtOpenBracket)
{
    Session s = typed("(x^2", true);
    Document d = s.document();
    CaretPosition out = precedence_widen(d, 1, Assoc::Left, s.registry());
    EXPECT_EQ(out.path, (Path{0, 0}));
    EXPECT_EQ(out.offset, 2u);
}
