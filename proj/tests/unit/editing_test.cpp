#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace semedit;
using namespace semedit::testing;

namespace {

EditResult select(Session& s, const std::string& anchor, const std::string& focus)
{
    return s.apply(EditCommand::select(CaretPosition::parse(anchor), CaretPosition::parse(focus)));
}

EditResult place(Session& s, const std::string& at)
{
    return select(s, at, at);
}

bool has_event(const EditResult& r, const std::string& name)
{
    for (const auto& e : r.transform_log)
        if (e.event == name)
            return true;
    return false;
}

/// (2+3)*4 with an extra open bracket left of 3.
Session split_prefix()
{
    Session s = typed("(2+3)*4");
    place(s, "0/0/0/2/0/2:0");
    key(s, "(");
    return s;
}

} // namespace

TEST(Editing, DigitIsAutoDetectText)
{
    Session s;
    EditResult r = key(s, "3");
    EXPECT_EQ(r.status, EditStatus::Applied);
    const DocNode& t = s.document().node_at({0, 0, 0});
    EXPECT_EQ(t.kind, NodeKind::Text);
    EXPECT_EQ(t.role, ContentRole::auto_detect());
    EXPECT_EQ(t.text, "3");
}

TEST(Editing, BackspaceBlackBoxesOperator)
{
    Session s = typed("3+2");
    press(s, PressKey::Left);
    EditResult r = press(s, PressKey::Backspace);
    ASSERT_EQ(r.transform_log.size(), 1u);
    EXPECT_EQ(r.transform_log[0], (TransformEvent{"OperatorBlackBoxed", "+", "■"}));
    EXPECT_TRUE(is_noop(s.document().node_at({0, 0, 1})));
}

TEST(Editing, SecondBackspaceOnBlackBoxIsRejected)
{
    Session s = typed("3+2");
    press(s, PressKey::Left);
    press(s, PressKey::Backspace);
    DocNode before = s.document().root();
    EditResult r = press(s, PressKey::Backspace);
    EXPECT_EQ(r.status, EditStatus::Rejected);
    EXPECT_EQ(r.reason, "ProtectedNoOp");
    EXPECT_EQ(s.document().root(), before);
}

TEST(Editing, FillingBlackBoxThenAutoReplace)
{
    Session s = typed("3+2");
    press(s, PressKey::Left);
    press(s, PressKey::Backspace);
    EditResult plus = key(s, "+");
    ASSERT_EQ(plus.transform_log.size(), 1u);
    EXPECT_EQ(plus.transform_log[0].event, "OperatorFilled");
    EditResult minus = key(s, "-");
    ASSERT_EQ(minus.transform_log.size(), 1u);
    EXPECT_EQ(minus.transform_log[0], (TransformEvent{"AutoReplaced", "+", "±"}));
    EXPECT_NE(content(s).find("<csymbol cd=\"semedit\">pm</csymbol>"), std::string::npos);
}

TEST(Editing, TypedBracketsGroup)
{
    Session s = typed("(1+2)*3");
    EXPECT_EQ(content(s),
              "<math><apply><times/><apply><plus/><cn>1</cn><cn>2</cn></apply><cn>3</cn></apply></math>");
}

TEST(Editing, BracketCommandsMatchTypedBrackets)
{
    Session s;
    s.apply(EditCommand::bracket(true));
    key(s, "1");
    key(s, "+");
    key(s, "2");
    s.apply(EditCommand::bracket(false));
    EXPECT_EQ(s.document().root(), typed("(1+2)").document().root());
}

TEST(Editing, CloseAcrossPairSplitsIt)
{
    Session s = split_prefix();
    place(s, "0/0:3");
    EditResult r = s.apply(EditCommand::bracket(false));
    EXPECT_EQ(r.status, EditStatus::Applied);
    EXPECT_TRUE(has_event(r, "BracketReassociated"));
    EXPECT_TRUE(validate(s.document()).empty());
}

TEST(Editing, BackspaceAfterSplitRestores)
{
    Session s = split_prefix();
    place(s, "0/0:3");
    DocNode before = s.document().root();
    s.apply(EditCommand::bracket(false));
    EditResult r = press(s, PressKey::Backspace);
    EXPECT_TRUE(has_event(r, "StructureReverted"));
    EXPECT_EQ(s.document().root(), before);
}

TEST(Editing, DeletingTypedCloseRevertsToPendingOpen)
{
    Session s = typed("2*(3+4");
    DocNode before = s.document().root();
    s.apply(EditCommand::bracket(false));
    EXPECT_EQ(content(s).find("unbalanced"), std::string::npos);
    EditResult r = press(s, PressKey::Backspace);
    EXPECT_TRUE(has_event(r, "StructureReverted"));
    EXPECT_EQ(s.document().root(), before);
}

TEST(Editing, DivideCaretInNumerator)
{
    Session s;
    s.apply(EditCommand::insert_template("divide"));
    EXPECT_EQ(s.document().caret().to_string(), "0/0/0/0/0:0");
    key(s, "1");
    EXPECT_EQ(content(s), "<math><apply><divide/><cn>1</cn><ci>□</ci></apply></math>");
}

TEST(Editing, SelectionMovesIntoFirstSlot)
{
    Session s = typed("x+1");
    select(s, "0/0:0", "0/0:3");
    s.apply(EditCommand::insert_template("divide"));
    EXPECT_EQ(content(s),
              "<math><apply><divide/><apply><plus/><ci>x</ci><cn>1</cn></apply><ci>□</ci></apply></math>");
    EXPECT_EQ(s.document().caret().to_string(), "0/0/0/1/0:0");
}

TEST(Editing, BracketTemplateKeepsSelection)
{
    Session s = typed("x+1");
    select(s, "0/0:0", "0/0:3");
    s.apply(EditCommand::insert_template("bracket-round"));
    EXPECT_EQ(content(s), "<math><apply><plus/><ci>x</ci><cn>1</cn></apply></math>");
    EXPECT_TRUE(is_bracket_pair(s.document().node_at({0, 0, 0})));
    auto range = s.document().normalized_selection();
    ASSERT_TRUE(range.has_value());
    EXPECT_EQ(range->line, (Path{0, 0, 0, 2, 0}));
    EXPECT_EQ(range->begin, 0u);
    EXPECT_EQ(range->end, 3u);
}

TEST(Editing, PowerWithSelectionPutsCaretInExponent)
{
    Session s = typed("a");
    select(s, "0/0:0", "0/0:1");
    s.apply(EditCommand::insert_template("power"));
    EXPECT_EQ(content(s), "<math><apply><power/><ci>a</ci><ci>□</ci></apply></math>");
    EXPECT_EQ(s.document().caret().to_string(), "0/0/0/1/0:0");
}

TEST(Editing, CutAllThenPasteRestores)
{
    Session s = typed("2*3+4");
    std::string before = content(s);
    select(s, "0/0:0", "0/0:5");
    EXPECT_EQ(s.apply(EditCommand::cut()).status, EditStatus::Applied);
    EXPECT_EQ(content(s), "<math/>");
    s.apply(EditCommand::paste());
    EXPECT_EQ(content(s), before);
}

TEST(Editing, CutOperandLeavesPlaceholder)
{
    Session s = typed("3+2");
    select(s, "0/0:2", "0/0:3");
    s.apply(EditCommand::cut());
    EXPECT_EQ(content(s), "<math><apply><plus/><cn>3</cn><ci>□</ci></apply></math>");
}

TEST(Editing, CopyPasteTwice)
{
    Session s = typed("a");
    select(s, "0/0:0", "0/0:1");
    EXPECT_EQ(s.apply(EditCommand::copy()).status, EditStatus::NoEffect);
    EXPECT_FALSE(s.clipboard().empty());
    s.apply(EditCommand::press_key(PressKey::End));
    key(s, "+");
    s.apply(EditCommand::paste());
    key(s, "+");
    s.apply(EditCommand::paste());
    EXPECT_EQ(content(s), "<math><apply><plus/><ci>a</ci><ci>a</ci><ci>a</ci></apply></math>");
}

TEST(Editing, SelectionErrors)
{
    Session s;
    EditResult cut = s.apply(EditCommand::cut());
    EXPECT_EQ(cut.status, EditStatus::Rejected);
    EXPECT_EQ(cut.reason, "NoSelection");
    EditResult copy = s.apply(EditCommand::copy());
    EXPECT_EQ(copy.reason, "NoSelection");
    EditResult paste = s.apply(EditCommand::paste());
    EXPECT_EQ(paste.status, EditStatus::Rejected);
    EXPECT_EQ(paste.reason, "EmptyClipboard");
}

TEST(Editing, UnknownTemplateRejected)
{
    Session s;
    EditResult r = s.apply(EditCommand::insert_template("nosuch"));
    EXPECT_EQ(r.status, EditStatus::Rejected);
    EXPECT_EQ(r.reason, "UnknownTemplate");
    EXPECT_EQ(content(s), "<math/>");
}

TEST(Editing, UndoRedoOnFreshSessionIsNoEffect)
{
    Session s;
    EXPECT_EQ(s.apply(EditCommand::undo()).status, EditStatus::NoEffect);
    EXPECT_EQ(s.apply(EditCommand::redo()).status, EditStatus::NoEffect);
}

TEST(Editing, UndoRedo)
{
    Session s = typed("1+2");
    std::string full = content(s);
    s.apply(EditCommand::undo());
    std::string partial = content(s);
    EXPECT_NE(partial, full);
    s.apply(EditCommand::redo());
    EXPECT_EQ(content(s), full);
    s.apply(EditCommand::undo());
    key(s, "3");
    EXPECT_EQ(s.apply(EditCommand::redo()).status, EditStatus::NoEffect);
}

TEST(Editing, RejectedCommandLeavesNoHistory)
{
    Session s = typed("1");
    s.apply(EditCommand::insert_template("nosuch"));
    s.apply(EditCommand::undo());
    EXPECT_EQ(content(s), "<math/>");
}

TEST(Editing, AutoReplaceDefaults)
{
    AutoReplaceTable t = AutoReplaceTable::defaults();
    EXPECT_EQ(t.lookup("<", "="), "≤");
    EXPECT_EQ(t.lookup(">", "="), "≥");
    EXPECT_EQ(t.lookup("+", "-"), "±");
    EXPECT_FALSE(t.lookup("≤", "=").has_value());
}

TEST(Editing, AutoReplaceCycleRejected)
{
    AutoReplaceTable t;
    t.add("a", "x", "b");
    try {
        t.add("b", "x", "a");
        FAIL() << "cycle accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DefinitionSyntax);
    }
    EXPECT_EQ(t.size(), 1u);
}

TEST(Editing, KeyIntoReadOnlyGlyphRejected)
{
    Session s;
    s.apply(EditCommand::insert_template("sin"));
    place(s, "0/0:0");
    EditResult r = press(s, PressKey::Delete);
    EXPECT_NE(r.status, EditStatus::Applied);
    EXPECT_TRUE(validate(s.document()).empty());
}
