#include "stylemetric/style_checks.hpp"

#include <algorithm>
#include <array>
#include <regex>
#include <unordered_map>

namespace stylemetric {

using java::Block;
using java::BlockOwner;
using java::Control;
using java::ControlKind;
using java::DeclKind;
using java::MemberKind;
using java::npos;
using java::Statement;
using java::StatementKind;
using java::Token;
using java::TokenKind;
using java::TokenRole;

namespace {

constexpr std::array<AttributeInfo, kAttributeCount> kTable = {{
    {Attribute::NoLineWrap, "NoLineWrap", Aspect::Structure, 1, true, false},
    {Attribute::AvoidStarImport, "AvoidStarImport", Aspect::Structure, 2, true, false},
    {Attribute::OneTopLevelClass, "OneTopLevelClass", Aspect::Structure, 3, true, true},
    {Attribute::EmptyLineSeparator, "EmptyLineSeparator", Aspect::Structure, 4, false, true},
    {Attribute::RightCurly, "RightCurly", Aspect::Formatting, 5, true, true},
    {Attribute::SeparatorWrap, "SeparatorWrap", Aspect::Formatting, 6, true, false},
    {Attribute::WhitespaceAround, "WhitespaceAround", Aspect::Formatting, 7, true, true},
    {Attribute::GenericWhitespace, "GenericWhitespace", Aspect::Formatting, 8, true, true},
    {Attribute::OperatorWrap, "OperatorWrap", Aspect::Formatting, 9, true, true},
    {Attribute::LineLength, "LineLength", Aspect::Formatting, 10, false, false},
    {Attribute::LeftCurly, "LeftCurly", Aspect::Formatting, 11, true, true},
    {Attribute::EmptyBlock, "EmptyBlock", Aspect::Formatting, 12, true, true},
    {Attribute::NeedBraces, "NeedBraces", Aspect::Formatting, 13, true, true},
    {Attribute::MultipleVariableDeclarations, "MultipleVariableDeclarations", Aspect::Formatting, 14, true, true},
    {Attribute::OneStatementPerLine, "OneStatementPerLine", Aspect::Formatting, 15, true, true},
    {Attribute::UpperEll, "UpperEll", Aspect::Formatting, 16, true, false},
    {Attribute::ModifierOrder, "ModifierOrder", Aspect::Formatting, 17, true, true},
    {Attribute::FallThrough, "FallThrough", Aspect::Formatting, 18, false, true},
    {Attribute::MissingSwitchDefault, "MissingSwitchDefault", Aspect::Formatting, 19, false, true},
    {Attribute::TypeName, "TypeName", Aspect::Naming, 20, true, true},
    {Attribute::MethodName, "MethodName", Aspect::Naming, 21, true, true},
    {Attribute::MemberName, "MemberName", Aspect::Naming, 22, true, true},
    {Attribute::ParameterName, "ParameterName", Aspect::Naming, 23, true, true},
    {Attribute::LocalVariableName, "LocalVariableName", Aspect::Naming, 24, true, true},
    {Attribute::Indentation, "Indentation", Aspect::Base, 0, true, true},
}};

constexpr std::array kModifierOrder = {
    "public", "protected", "private", "abstract", "default", "static",
    "final",  "transient", "volatile", "synchronized", "native", "strictfp",
};

int modifier_rank(std::string_view m) {
  for (std::size_t i = 0; i < kModifierOrder.size(); ++i) {
    if (m == kModifierOrder[i]) return static_cast<int>(i);
  }
  return -1;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\f'; }
bool is_eol(char c) { return c == '\n' || c == '\r'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_alnum(char c) { return is_upper(c) || is_lower(c) || (c >= '0' && c <= '9'); }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Google configuration naming patterns.
constexpr int kUnset = -1000000;

constexpr const char* kTypePattern = "^[A-Z][a-zA-Z0-9]*$";
constexpr const char* kMemberPattern = "^[a-z][a-z0-9][a-zA-Z0-9]*$";
constexpr const char* kMethodPattern = "^[a-z][a-z0-9][a-zA-Z0-9_]*$";
constexpr const char* kLocalPattern = "^[a-z]([a-z0-9][a-zA-Z0-9]*)?$";

bool upper_camel(std::string_view s) {
  return !s.empty() && is_upper(s[0]) && std::all_of(s.begin() + 1, s.end(), is_alnum);
}
bool member_name_ok(std::string_view s, bool allow_underscore) {
  if (s.size() < 2 || !is_lower(s[0]) || !(is_lower(s[1]) || is_digit(s[1]))) return false;
  return std::all_of(s.begin() + 2, s.end(), [&](char c) { return is_alnum(c) || (allow_underscore && c == '_'); });
}
bool local_name_ok(std::string_view s) { return (s.size() == 1 && is_lower(s[0])) || member_name_ok(s, false); }

std::string_view kind_word(ControlKind k) {
  switch (k) {
    case ControlKind::If: return "if";
    case ControlKind::Else: return "else";
    case ControlKind::For: return "for";
    case ControlKind::While: return "while";
    case ControlKind::DoWhile: return "do";
    case ControlKind::Try: return "try";
    case ControlKind::Catch: return "catch";
    case ControlKind::Finally: return "finally";
    case ControlKind::Switch: return "switch";
    case ControlKind::Synchronized: return "synchronized";
  }
  return "";
}

// Shared lookups over one parsed source.
class Ctx {
 public:
  explicit Ctx(const ParsedSource& src)
      : src_(src), toks_(src.tokens()), tree_(src.tree()), text_(src.text()) {
    code_pos_.assign(toks_.size(), npos);
    for (std::size_t p = 0; p < tree_.code.size(); ++p) code_pos_[tree_.code[p]] = p;
  }

  const ParsedSource& src() const { return src_; }
  const std::vector<Token>& toks() const { return toks_; }
  const java::StructureTree& tree() const { return tree_; }
  const Token& tok(std::size_t t) const { return toks_[t]; }
  int line(std::size_t t) const { return toks_[t].line; }
  int col(std::size_t t) const { return toks_[t].column; }
  std::string_view text(std::size_t t) const { return t < toks_.size() ? toks_[t].text : std::string_view{}; }
  TokenRole role(std::size_t t) const { return tree_.roles[t]; }

  std::size_t prev_code(std::size_t t) const {
    const std::size_t p = code_pos_[t];
    return p == npos || p == 0 ? npos : tree_.code[p - 1];
  }
  std::size_t next_code(std::size_t t) const {
    const std::size_t p = code_pos_[t];
    return p == npos || p + 1 >= tree_.code.size() ? npos : tree_.code[p + 1];
  }

  // Byte immediately before the token on its line, or 0 at line start.
  char char_before(std::size_t t) const {
    const std::size_t off = toks_[t].offset;
    if (off == 0 || is_eol(text_[off - 1])) return 0;
    return text_[off - 1];
  }
  // Byte immediately after the token, or 0 at end of line/input.
  char char_after(std::size_t t, std::size_t len = npos) const {
    const std::size_t off = toks_[t].offset + (len == npos ? toks_[t].text.size() : len);
    if (off >= text_.size() || is_eol(text_[off])) return 0;
    return text_[off];
  }
  bool only_space_before(std::size_t t) const {
    std::size_t off = toks_[t].offset;
    while (off > 0 && !is_eol(text_[off - 1])) {
      if (!is_space(text_[off - 1])) return false;
      --off;
    }
    return true;
  }
  bool only_space_after(std::size_t t) const {
    for (std::size_t off = toks_[t].offset + toks_[t].text.size(); off < text_.size() && !is_eol(text_[off]); ++off) {
      if (!is_space(text_[off])) return false;
    }
    return true;
  }
  bool blank_line(int line) const {
    const auto l = src_.lines()[line];
    return std::all_of(l.begin(), l.end(), is_space);
  }
  int line_count() const { return static_cast<int>(src_.lines().size()); }

  // No code tokens strictly between the braces of a block.
  bool block_empty(const Block& b) const {
    return b.close != npos && next_code(b.open) == b.close;
  }

  void add(CheckResult& r, Attribute a, std::size_t t, std::string msg) const {
    r.violations.push_back(Violation{a, line(t), col(t), std::move(msg)});
  }

 private:
  const ParsedSource& src_;
  const std::vector<Token>& toks_;
  const java::StructureTree& tree_;
  std::string_view text_;
  std::vector<std::size_t> code_pos_;
};

std::string col_msg(std::string_view what, int col, std::string_view tail) {
  return "'" + std::string(what) + "' at column " + std::to_string(col) + " " + std::string(tail);
}

// ---------------------------------------------------------------------------

CheckResult check_line_length(const ParsedSource& src) {
  static const std::regex ignore(R"(^package.*|^import.*|href\s*=\s*"[^"]*"|http://|https://|ftp://)");
  CheckResult r;
  const auto& lines = src.lines();
  r.opportunities = static_cast<int>(lines.size());
  for (int l = 1; l <= static_cast<int>(lines.size()); ++l) {
    const auto s = lines[l];
    const int width = java::expanded_width(s, kTabWidth);
    if (width <= kMaxLineLength) continue;
    if (std::regex_search(s.begin(), s.end(), ignore)) continue;
    r.violations.push_back(Violation{Attribute::LineLength, l, 1,
                                     "Line is longer than " + std::to_string(kMaxLineLength) + " characters (found " +
                                         std::to_string(width) + ")."});
  }
  return r;
}

CheckResult check_upper_ell(const Ctx& c) {
  CheckResult r;
  for (std::size_t t = 0; t < c.toks().size(); ++t) {
    if (c.tok(t).kind != TokenKind::LongLiteral) continue;
    ++r.opportunities;
    if (c.text(t).back() == 'l') c.add(r, Attribute::UpperEll, t, "Should use uppercase 'L'.");
  }
  return r;
}

CheckResult check_avoid_star_import(const Ctx& c) {
  CheckResult r;
  const auto& tree = c.tree();
  r.opportunities = static_cast<int>(tree.imports.size()) + (tree.package.first != npos ? 1 : 0);
  for (const auto& imp : tree.imports) {
    if (!imp.star) continue;
    std::size_t star = imp.first;
    for (std::size_t t = imp.first; t <= imp.last && t < c.toks().size(); ++t) {
      if (c.role(t) == TokenRole::ImportStar) star = t;
    }
    c.add(r, Attribute::AvoidStarImport, star, "Using the '.*' form of import should be avoided - " + imp.path + ".*.");
  }
  return r;
}

CheckResult check_no_line_wrap(const Ctx& c) {
  CheckResult r;
  const auto& tree = c.tree();
  auto one = [&](std::size_t first, std::size_t last, std::string_view word) {
    ++r.opportunities;
    if (first != npos && last != npos && c.line(first) != c.line(last)) {
      c.add(r, Attribute::NoLineWrap, first, std::string(word) + " statement should not be line-wrapped.");
    }
  };
  if (tree.package.first != npos) one(tree.package.first, tree.package.last, "package");
  for (const auto& imp : tree.imports) one(imp.first, imp.last, "import");
  return r;
}

CheckResult check_separator_wrap(const Ctx& c) {
  CheckResult r;
  for (const std::size_t t : c.tree().code) {
    const auto s = c.text(t);
    if (c.tok(t).kind != TokenKind::Separator) continue;
    bool nl = false;
    if (s == "." || s == "::") {
      nl = true;
    } else if (s == "," || s == "...") {
      nl = false;
    } else if (s == "[" && c.text(c.next_code(t)) == "]") {
      nl = false;
    } else {
      continue;
    }
    ++r.opportunities;
    if (nl && c.only_space_after(t)) {
      c.add(r, Attribute::SeparatorWrap, t, "'" + std::string(s) + "' should be on a new line.");
    } else if (!nl && c.only_space_before(t)) {
      c.add(r, Attribute::SeparatorWrap, t, "'" + std::string(s) + "' should be on the previous line.");
    }
  }
  return r;
}

CheckResult check_operator_wrap(const Ctx& c) {
  CheckResult r;
  for (const std::size_t t : c.tree().code) {
    const auto role = c.role(t);
    if (role != TokenRole::BinaryOperator && role != TokenRole::TernaryQuestion && role != TokenRole::MethodRef &&
        role != TokenRole::TypeBoundAnd) {
      continue;
    }
    ++r.opportunities;
    if (c.only_space_after(t) && !c.only_space_before(t)) {
      c.add(r, Attribute::OperatorWrap, t, "'" + std::string(c.text(t)) + "' should be on a new line.");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

class StructureChecks {
 public:
  explicit StructureChecks(const Ctx& c) : c_(c), tree_(c.tree()) {
    const std::size_t n = c.toks().size();
    block_of_open_.assign(n, -1);
    block_of_close_.assign(n, -1);
    innermost_.assign(n, -1);
    for (std::size_t b = 0; b < tree_.blocks.size(); ++b) {
      const Block& blk = tree_.blocks[b];
      block_of_open_[blk.open] = static_cast<int>(b);
      if (blk.close != npos) {
        block_of_close_[blk.close] = static_cast<int>(b);
        for (std::size_t t = blk.open + 1; t < blk.close; ++t) innermost_[t] = static_cast<int>(b);
      }
    }
    stmt_by_first_.assign(n, -1);
    for (std::size_t s = 0; s < tree_.statements.size(); ++s) {
      const std::size_t f = tree_.statements[s].first;
      if (f != npos && stmt_by_first_[f] < 0) stmt_by_first_[f] = static_cast<int>(s);
    }
    match_.assign(n, npos);
    std::vector<std::size_t> stack;
    for (const std::size_t t : tree_.code) {
      const auto s = c.text(t);
      if (c.tok(t).kind != TokenKind::Separator) continue;
      if (s == "(" || s == "[" || s == "{") {
        stack.push_back(t);
      } else if ((s == ")" || s == "]" || s == "}") && !stack.empty()) {
        match_[stack.back()] = t;
        match_[t] = stack.back();
        stack.pop_back();
      }
    }
  }

  CheckResult one_top_level_class() const {
    CheckResult r;
    std::vector<const java::Declaration*> tops;
    for (const auto& d : tree_.declarations) {
      if (d.kind == DeclKind::Type && d.block == -1) tops.push_back(&d);
    }
    r.opportunities = static_cast<int>(tops.size());
    auto is_public = [&](const java::Declaration* d) {
      return std::any_of(d->modifiers.begin(), d->modifiers.end(),
                         [&](const java::Modifier& m) { return !m.annotation && c_.text(m.token) == "public"; });
    };
    const bool any_public = std::any_of(tops.begin(), tops.end(), is_public);
    for (std::size_t k = 0; k < tops.size(); ++k) {
      const auto* d = tops[k];
      if (any_public ? is_public(d) : k == 0) continue;
      c_.add(r, Attribute::OneTopLevelClass, d->first,
             "Top-level class " + std::string(c_.text(d->name)) + " has to reside in its own source file.");
    }
    return r;
  }

  CheckResult empty_line_separator() const {
    CheckResult r;
    auto governed = [](MemberKind k) { return k != MemberKind::EnumConstants && k != MemberKind::Empty; };
    auto is_import = [](MemberKind k) { return k == MemberKind::Import || k == MemberKind::StaticImport; };
    const auto& ms = tree_.members;
    if (tree_.package.first != npos && c_.line(tree_.package.first) > 1) {
      ++r.opportunities;
      if (!c_.blank_line(c_.line(tree_.package.first) - 1)) {
        c_.add(r, Attribute::EmptyLineSeparator, tree_.package.first, "'package' should be separated from previous line.");
      }
    }
    // Members of one container are contiguous in `members` only at the
    // compilation-unit level; nested containers interleave, so group first.
    std::unordered_map<int, std::vector<std::size_t>> by_container;
    std::vector<int> order;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      auto [it, fresh] = by_container.try_emplace(ms[i].container);
      if (fresh) order.push_back(ms[i].container);
      it->second.push_back(i);
    }
    for (const int container : order) {
      auto list = by_container[container];
      list.erase(std::remove_if(list.begin(), list.end(), [&](std::size_t i) { return ms[i].kind == MemberKind::Empty; }),
                 list.end());
      std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) { return ms[a].first < ms[b].first; });
      for (std::size_t k = 0; k + 1 < list.size(); ++k) {
        const auto& x = ms[list[k]];
        const auto& y = ms[list[k + 1]];
        if (!governed(x.kind)) continue;
        if (is_import(x.kind) && is_import(y.kind)) continue;
        if (x.kind == MemberKind::Field && y.kind == MemberKind::Field) continue;
        ++r.opportunities;
        bool blank = false;
        for (int l = c_.line(x.last) + 1; l < c_.line(y.first); ++l) {
          if (c_.blank_line(l)) {
            blank = true;
            break;
          }
        }
        if (!blank) {
          c_.add(r, Attribute::EmptyLineSeparator, y.first,
                 "'" + std::string(c_.text(y.first)) + "' should be separated from previous line.");
        }
      }
    }
    // Checkstyle 8.24 treats the comma after each non-final declarator of a
    // class field as the next member.
    for (const auto& d : tree_.declarations) {
      if (d.kind != DeclKind::Field || d.declarator == 0 || d.in_interface || d.block < 0) continue;
      const Block& owner = tree_.blocks[static_cast<std::size_t>(d.block)];
      if (owner.owner != BlockOwner::Type || !class_body(owner)) continue;
      const std::size_t comma = c_.prev_code(d.name);
      if (comma == npos || c_.text(comma) != ",") continue;
      const std::size_t before = c_.prev_code(comma);
      ++r.opportunities;
      bool blank = false;
      for (int l = c_.line(before) + 1; l < c_.line(comma); ++l) blank = blank || c_.blank_line(l);
      if (!blank) c_.add(r, Attribute::EmptyLineSeparator, comma, "',' should be separated from previous statement.");
    }
    return r;
  }

  bool class_body(const Block& b) const { return b.keyword != npos && c_.text(b.keyword) == "class"; }

  bool left_curly_governed(int b) const {
    const Block& blk = tree_.blocks[static_cast<std::size_t>(b)];
    switch (blk.owner) {
      case BlockOwner::InstanceInit:
      case BlockOwner::ArrayInit:
        return false;
      case BlockOwner::Plain:
        return is_case_block(b);
      default:
        return true;
    }
  }

  // A plain block that is the first statement of a case group.
  bool is_case_block(int b) const {
    const int s = stmt_by_first_[tree_.blocks[static_cast<std::size_t>(b)].open];
    if (s < 0) return false;
    const int parent = tree_.statements[static_cast<std::size_t>(s)].parent;
    if (parent < 0 || tree_.statements[static_cast<std::size_t>(parent)].kind != StatementKind::Switch) return false;
    const auto& sw = tree_.switches[static_cast<std::size_t>(tree_.statements[static_cast<std::size_t>(parent)].switch_index)];
    return std::any_of(sw.arms.begin(), sw.arms.end(),
                       [&](const java::SwitchArm& a) { return !a.statements.empty() && a.statements.front() == s; });
  }

  static bool is_code_block(BlockOwner o) {
    return o != BlockOwner::Type && o != BlockOwner::AnonymousClass && o != BlockOwner::EnumConstant &&
           o != BlockOwner::Switch;
  }

  CheckResult left_curly() const {
    CheckResult r;
    for (std::size_t b = 0; b < tree_.blocks.size(); ++b) {
      if (!left_curly_governed(static_cast<int>(b))) continue;
      const Block& blk = tree_.blocks[b];
      ++r.opportunities;
      if (c_.char_after(blk.open) == '}') continue;
      if (c_.only_space_before(blk.open)) {
        c_.add(r, Attribute::LeftCurly, blk.open, col_msg("{", c_.col(blk.open), "should be on the previous line."));
        continue;
      }
      if (is_code_block(blk.owner)) {
        const std::size_t next = c_.next_code(blk.open);
        if (next != npos && next != blk.close && c_.line(next) == c_.line(blk.open)) {
          c_.add(r, Attribute::LeftCurly, blk.open, col_msg("{", c_.col(blk.open), "should have line break after."));
        }
      }
    }
    return r;
  }

  CheckResult right_curly() const {
    CheckResult r;
    // "same" policy: multi-block statements.
    for (const Control& ctl : tree_.controls) {
      const bool same = ctl.kind == ControlKind::If || ctl.kind == ControlKind::Else || ctl.kind == ControlKind::Try ||
                        ctl.kind == ControlKind::Catch || ctl.kind == ControlKind::Finally ||
                        ctl.kind == ControlKind::DoWhile;
      if (!same || !ctl.braced || ctl.block < 0) continue;
      const Block& blk = tree_.blocks[static_cast<std::size_t>(ctl.block)];
      if (blk.close == npos) continue;
      ++r.opportunities;
      const std::size_t rc = blk.close;
      const std::size_t before = c_.prev_code(rc);
      if (before != npos && before != blk.open && c_.line(before) == c_.line(rc) && c_.line(blk.open) != c_.line(rc)) {
        c_.add(r, Attribute::RightCurly, rc, col_msg("}", c_.col(rc), "should have line break before."));
        continue;
      }
      if (ctl.next_part != npos) {
        if (c_.line(ctl.next_part) != c_.line(rc)) {
          c_.add(r, Attribute::RightCurly, rc,
                 col_msg("}", c_.col(rc),
                         "should be on the same line as the next part of a multi-block statement (one that "
                         "directly contains multiple blocks: if/else-if/else, do/while or try/catch/finally)."));
        }
        continue;
      }
      const std::size_t next = c_.next_code(rc);
      if (next != npos && c_.line(next) == c_.line(rc)) {
        c_.add(r, Attribute::RightCurly, rc, col_msg("}", c_.col(rc), "should be alone on a line."));
      }
    }
    // "alone" policy.
    for (const Block& blk : tree_.blocks) {
      const bool alone = blk.owner == BlockOwner::Type || blk.owner == BlockOwner::Method ||
                         blk.owner == BlockOwner::Constructor || blk.owner == BlockOwner::For ||
                         blk.owner == BlockOwner::While || blk.owner == BlockOwner::StaticInit ||
                         blk.owner == BlockOwner::InstanceInit || blk.owner == BlockOwner::Switch;
      if (!alone || blk.close == npos) continue;
      ++r.opportunities;
      if (c_.block_empty(blk)) continue;
      const std::size_t next = c_.next_code(blk.close);
      const bool next_same_line = next != npos && c_.line(next) == c_.line(blk.close);
      if (!c_.only_space_before(blk.close) || next_same_line) {
        c_.add(r, Attribute::RightCurly, blk.close, col_msg("}", c_.col(blk.close), "should be alone on a line."));
      }
    }
    return r;
  }

  CheckResult empty_block() const {
    CheckResult r;
    for (const Control& ctl : tree_.controls) {
      if (ctl.kind != ControlKind::Try && ctl.kind != ControlKind::Finally && ctl.kind != ControlKind::If &&
          ctl.kind != ControlKind::Else && ctl.kind != ControlKind::Switch) {
        continue;
      }
      ++r.opportunities;
      if (!ctl.braced || ctl.block < 0) continue;
      const Block& blk = tree_.blocks[static_cast<std::size_t>(ctl.block)];
      if (blk.close == npos) continue;
      bool has_text = false;
      for (std::size_t t = blk.open + 1; t < blk.close; ++t) {
        const auto k = c_.tok(t).kind;
        if (k != TokenKind::Whitespace && k != TokenKind::Newline) {
          has_text = true;
          break;
        }
      }
      if (!has_text) {
        c_.add(r, Attribute::EmptyBlock, blk.open, "Empty " + std::string(kind_word(ctl.kind)) + " block.");
      }
    }
    return r;
  }

  CheckResult need_braces() const {
    CheckResult r;
    for (const Control& ctl : tree_.controls) {
      const bool governed = ctl.kind == ControlKind::If || (ctl.kind == ControlKind::Else && !ctl.else_if) ||
                            ctl.kind == ControlKind::For || ctl.kind == ControlKind::While ||
                            ctl.kind == ControlKind::DoWhile;
      if (!governed) continue;
      ++r.opportunities;
      if (!ctl.braced) {
        c_.add(r, Attribute::NeedBraces, ctl.keyword,
               "'" + std::string(c_.text(ctl.keyword)) + "' construct must use '{}'s.");
      }
    }
    return r;
  }

  static bool is_var_decl(const Statement& s) {
    return (s.kind == StatementKind::LocalVariable && !s.in_for_init) || s.kind == StatementKind::FieldDecl;
  }

  CheckResult multiple_variable_declarations() const {
    CheckResult r;
    const auto& ss = tree_.statements;
    std::vector<int> next_decl(ss.size(), -1);
    auto link = [&](const std::vector<int>& seq) {
      for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        if (seq[k] >= 0 && seq[k + 1] >= 0) next_decl[static_cast<std::size_t>(seq[k])] = seq[k + 1];
      }
    };
    for (const auto& s : ss) link(s.children);
    for (const auto& sw : tree_.switches) {
      for (const auto& arm : sw.arms) link(arm.statements);
    }
    {
      std::unordered_map<int, std::vector<int>> fields;
      std::vector<int> order;
      for (const auto& m : tree_.members) {
        auto [it, fresh] = fields.try_emplace(m.container);
        if (fresh) order.push_back(m.container);
        it->second.push_back(m.kind == MemberKind::Field ? m.statement : -1);
      }
      for (int k : order) link(fields[k]);
    }
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const Statement& s = ss[i];
      if (!is_var_decl(s)) continue;
      ++r.opportunities;
      bool bad = s.declarators >= 2;
      if (!bad && next_decl[i] >= 0) {
        const Statement& n = ss[static_cast<std::size_t>(next_decl[i])];
        bad = is_var_decl(n) && s.last != npos && c_.line(n.first) == c_.line(s.last);
      }
      if (bad) {
        c_.add(r, Attribute::MultipleVariableDeclarations, s.first,
               s.declarators >= 2 ? "Each variable declaration must be in its own statement."
                                  : "Only one variable definition per line allowed.");
      }
    }
    return r;
  }

  static int binary_level(std::string_view op) {
    static const std::pair<std::string_view, int> kLevels[] = {
        {"||", 3}, {"&&", 4}, {"|", 5},  {"^", 6},  {"&", 7},   {"==", 8},  {"!=", 8},  {"<", 9},          {">", 9},
        {"<=", 9}, {">=", 9}, {"<<", 10}, {">>", 10}, {">>>", 10}, {"+", 11}, {"-", 11}, {"*", 12}, {"/", 12}, {"%", 12},
        {"instanceof", 9}};
    for (const auto& [text, level] : kLevels) {
      if (op == text) return level;
    }
    return 13;
  }

  // Token that heads the expression tree of the code tokens in [from, to].
  std::size_t expression_root(std::size_t from, std::size_t to) const {
    std::vector<std::size_t> top;
    for (std::size_t t = from; t != npos && t <= to; t = c_.next_code(t)) {
      top.push_back(t);
      const auto s = c_.text(t);
      if ((s == "(" || s == "[" || s == "{") && match_[t] != npos && match_[t] <= to) t = match_[t];
    }
    if (top.empty()) return from;
    std::size_t best = npos;
    int best_level = 100;
    for (const std::size_t t : top) {
      int level = 100;
      switch (c_.role(t)) {
        case TokenRole::Lambda: level = 0; break;
        case TokenRole::Assignment: level = 1; break;
        case TokenRole::TernaryQuestion: level = 2; break;
        case TokenRole::BinaryOperator: level = binary_level(c_.text(t)); break;
        default: break;
      }
      // Right-associative levels keep the first occurrence.
      if (level < best_level || (level == best_level && level > 2)) {
        best_level = level;
        best = t;
      }
    }
    if (best != npos) return best;
    const auto first = c_.text(top.front());
    if (top.size() == 1 && first == "(" && match_[top.front()] != npos) {
      const std::size_t inner = c_.next_code(top.front());
      if (inner != match_[top.front()]) return expression_root(inner, c_.prev_code(match_[top.front()]));
    }
    if (c_.role(top.front()) == TokenRole::UnaryOperator || first == "(") return top.front();
    const auto last = c_.text(top.back());
    if (top.size() > 1 && (last == "++" || last == "--")) return top.back();
    std::size_t postfix = npos;
    bool dotted = false;
    for (std::size_t k = 1; k < top.size(); ++k) {
      const std::size_t t = top[k];
      const auto s = c_.text(t);
      if (s == "." || c_.role(t) == TokenRole::MethodRef) {
        postfix = t;
        dotted = true;
      } else if (s == "(" || s == "[") {
        postfix = t;
      }
    }
    if (first == "new" && !dotted) return top.front();
    return postfix == npos ? top.front() : postfix;
  }

  // Line Checkstyle attributes to the statement ending at semicolon `semi`.
  int statement_anchor(std::size_t semi, int stmt, const java::Member* member, bool import_like) const {
    const std::size_t before = c_.prev_code(semi);
    if (before == npos) return c_.line(semi);
    if (import_like) {
      for (std::size_t t = before; t != npos; t = c_.prev_code(t)) {
        if (c_.text(t) == ".") return c_.line(t);
        if (c_.text(t) == "import" || c_.text(t) == "package") break;
      }
      return c_.line(before);
    }
    if (stmt >= 0) {
      const Statement& s = tree_.statements[static_cast<std::size_t>(stmt)];
      switch (s.kind) {
        case StatementKind::LocalVariable:
          return c_.line(s.first);
        case StatementKind::Expression:
          return c_.line(expression_root(s.first, before));
        case StatementKind::Return:
        case StatementKind::Throw:
        case StatementKind::Yield: {
          const std::size_t e = c_.next_code(s.first);
          return e == semi ? c_.line(semi) : c_.line(expression_root(e, before));
        }
        case StatementKind::Break:
        case StatementKind::Continue:
          return s.label != npos ? c_.line(s.label) : c_.line(semi);
        case StatementKind::FieldDecl: {
          for (std::size_t t = before; t != npos && t > s.first; t = c_.prev_code(t)) {
            const auto tx = c_.text(t);
            if ((tx == ")" || tx == "]" || tx == "}") && match_[t] != npos) {
              t = match_[t];
              continue;
            }
            if (tx == ",") break;
            if (c_.role(t) == TokenRole::Assignment) return c_.line(t);
          }
          return c_.line(before);
        }
        default:
          return c_.line(before);
      }
    }
    if (member) {
      for (std::size_t t = before; t != npos && t > member->first; t = c_.prev_code(t)) {
        if (c_.text(t) == "throws") return c_.line(t);
        if (c_.text(t) == ")") break;
      }
    }
    return c_.line(before);
  }

  CheckResult one_statement_per_line() const {
    CheckResult r;
    const std::size_t n = c_.toks().size();
    // Statement or member terminated by each ';' (innermost wins).
    std::vector<std::size_t> owner_first(n, npos);
    std::vector<int> owner_stmt(n, -1);
    std::vector<const java::Member*> owner_member(n, nullptr);
    std::vector<bool> import_like(n, false);
    for (std::size_t s = 0; s < tree_.statements.size(); ++s) {
      const auto& st = tree_.statements[s];
      if (st.last == npos || st.first == npos || c_.text(st.last) != ";") continue;
      if (owner_first[st.last] == npos || st.first > owner_first[st.last]) {
        owner_first[st.last] = st.first;
        owner_stmt[st.last] = static_cast<int>(s);
      }
    }
    for (const auto& m : tree_.members) {
      if (m.last != npos && c_.text(m.last) == ";" && owner_first[m.last] == npos) owner_member[m.last] = &m;
    }
    for (const auto& imp : tree_.imports) {
      if (imp.last != npos && c_.text(imp.last) == ";") import_like[imp.last] = true;
    }
    if (tree_.package.last != npos) import_like[tree_.package.last] = true;
    std::vector<bool> header(n, false);
    for (const auto& st : tree_.statements) {
      if (st.kind != StatementKind::For && st.kind != StatementKind::ForEach) continue;
      const std::size_t open = c_.next_code(st.first);
      if (open == npos || c_.text(open) != "(" || match_[open] == npos) continue;
      for (std::size_t t = open; t <= match_[open]; ++t) header[t] = true;
    }
    struct LambdaScope {
      std::size_t close;
      int line;
      int semis = 0;
    };
    std::vector<LambdaScope> lambdas;
    std::vector<int> pending_expression_lambdas;
    int last_line = 0;
    int lambda_end = 0;
    bool after_header = false;
    for (const std::size_t t : tree_.code) {
      while (!lambdas.empty() && t > lambdas.back().close) {
        lambda_end = lambdas.back().line;
        lambdas.pop_back();
      }
      if (c_.role(t) == TokenRole::Lambda) {
        const std::size_t body = c_.next_code(t);
        if (body != npos && c_.text(body) == "{" && match_[body] != npos) {
          lambdas.push_back({match_[body], c_.line(t)});
        } else {
          pending_expression_lambdas.push_back(c_.line(t));
        }
        continue;
      }
      if (c_.text(t) != ";" || c_.tok(t).kind != TokenKind::Separator) continue;
      if (owner_stmt[t] >= 0 && tree_.statements[static_cast<std::size_t>(owner_stmt[t])].kind == StatementKind::Empty) {
        continue;
      }
      for (const int line : pending_expression_lambdas) lambda_end = line;
      pending_expression_lambdas.clear();
      if (header[t]) {
        last_line = c_.line(t);
        after_header = true;
        continue;
      }
      ++r.opportunities;
      const int anchor = statement_anchor(t, owner_stmt[t], owner_member[t], import_like[t]);
      bool eligible = true;
      if (!lambdas.empty()) eligible = ++lambdas.back().semis > 1;
      if (eligible && anchor == last_line && !after_header && anchor != lambda_end) {
        c_.add(r, Attribute::OneStatementPerLine, t, "Only one statement per line allowed.");
      }
      last_line = c_.line(t);
      after_header = false;
    }
    return r;
  }

  CheckResult modifier_order() const {
    CheckResult r;
    std::vector<bool> seen(c_.toks().size(), false);
    for (const auto& d : tree_.declarations) {
      const auto& mods = d.modifiers;
      if (mods.size() < 2) continue;
      if (seen[mods.front().token]) continue;
      seen[mods.front().token] = true;
      ++r.opportunities;
      std::size_t bad = npos;
      std::string msg;
      bool keyword_seen = false;
      for (std::size_t i = 0; i < mods.size() && bad == npos; ++i) {
        if (!mods[i].annotation) {
          keyword_seen = true;
        } else if (keyword_seen && i + 1 < mods.size()) {
          bad = mods[i].token;
          msg = "'@" + std::string(c_.text(c_.next_code(mods[i].token))) +
                "' annotation modifier does not precede non-annotation modifiers.";
        }
      }
      int prev_rank = -1;
      for (std::size_t i = 0; i < mods.size() && bad == npos; ++i) {
        if (mods[i].annotation) continue;
        const int rank = modifier_rank(c_.text(mods[i].token));
        if (rank < prev_rank) {
          bad = mods[i].token;
          msg = "'" + std::string(c_.text(mods[i].token)) + "' modifier out of order with the JLS suggestions.";
        }
        prev_rank = std::max(prev_rank, rank);
      }
      if (bad != npos) c_.add(r, Attribute::ModifierOrder, bad, msg);
    }
    return r;
  }

  bool terminated(int si, bool use_break, bool use_continue) const {
    if (si < 0) return false;
    const Statement& s = tree_.statements[static_cast<std::size_t>(si)];
    switch (s.kind) {
      case StatementKind::Return:
      case StatementKind::Throw:
      case StatementKind::Yield:
        return true;
      case StatementKind::Break:
        return use_break || s.label != npos;
      case StatementKind::Continue:
        return use_continue || s.label != npos;
      case StatementKind::Block:
        return !s.children.empty() && terminated(s.children.back(), use_break, use_continue);
      case StatementKind::If:
        return s.has_else && s.children.size() >= 2 && terminated(s.children[0], use_break, use_continue) &&
               terminated(s.children[1], use_break, use_continue);
      case StatementKind::For:
      case StatementKind::ForEach:
      case StatementKind::While:
      case StatementKind::Do:
        return !s.children.empty() && terminated(s.children.back(), false, false);
      case StatementKind::Try: {
        if (s.children.empty()) return false;
        if (s.has_finally && terminated(s.children.back(), use_break, use_continue)) return true;
        const std::size_t n = s.children.size() - (s.has_finally ? 1 : 0);
        for (std::size_t k = 0; k < n; ++k) {
          if (!terminated(s.children[k], use_break, use_continue)) return false;
        }
        return n > 0;
      }
      case StatementKind::Switch: {
        if (s.switch_index < 0) return false;
        const auto& sw = tree_.switches[static_cast<std::size_t>(s.switch_index)];
        if (!sw.has_default || sw.arms.empty()) return false;
        return std::all_of(sw.arms.begin(), sw.arms.end(), [&](const java::SwitchArm& a) {
          return !a.statements.empty() && terminated(a.statements.back(), false, use_continue);
        });
      }
      case StatementKind::Synchronized:
      case StatementKind::Labeled:
        return !s.children.empty() && terminated(s.children.back(), use_break, use_continue);
      default:
        return false;
    }
  }

  CheckResult fall_through() const {
    static const std::regex relief("falls?[ -]?thr(u|ough)", std::regex::icase);
    CheckResult r;
    for (const auto& sw : tree_.switches) {
      r.opportunities += static_cast<int>(sw.arms.size());
      for (std::size_t k = 0; k + 1 < sw.arms.size(); ++k) {
        const auto& arm = sw.arms[k];
        const auto& next = sw.arms[k + 1];
        if (arm.arrow || arm.statements.empty() || next.labels.empty()) continue;
        if (terminated(arm.statements.back(), true, true)) continue;
        const std::size_t from = tree_.statements[static_cast<std::size_t>(arm.statements.back())].last;
        bool relieved = false;
        for (std::size_t t = from == npos ? next.labels.front() : from + 1; t < next.labels.front(); ++t) {
          if (c_.tok(t).kind == TokenKind::Comment) {
            const auto s = c_.text(t);
            if (std::regex_search(s.begin(), s.end(), relief)) {
              relieved = true;
              break;
            }
          }
        }
        if (!relieved) {
          c_.add(r, Attribute::FallThrough, next.labels.front(), "Fall through from previous branch of the switch statement.");
        }
      }
    }
    return r;
  }

  CheckResult missing_switch_default() const {
    CheckResult r;
    r.opportunities = static_cast<int>(tree_.switches.size());
    for (const auto& sw : tree_.switches) {
      if (!sw.has_default) c_.add(r, Attribute::MissingSwitchDefault, sw.keyword, "switch without \"default\" clause.");
    }
    return r;
  }

  CheckResult naming(Attribute a) const {
    CheckResult r;
    for (const auto& d : tree_.declarations) {
      bool governed = false;
      switch (a) {
        case Attribute::TypeName: governed = d.kind == DeclKind::Type; break;
        case Attribute::MethodName: governed = d.kind == DeclKind::Method; break;
        case Attribute::MemberName: governed = d.kind == DeclKind::Field && !d.is_static && !d.in_interface; break;
        case Attribute::ParameterName: governed = d.kind == DeclKind::Parameter; break;
        case Attribute::LocalVariableName: governed = d.kind == DeclKind::LocalVariable && !d.is_final; break;
        default: break;
      }
      if (!governed) continue;
      ++r.opportunities;
      const auto nm = c_.text(d.name);
      bool ok = false;
      const char* pattern = kLocalPattern;
      switch (a) {
        case Attribute::TypeName: ok = upper_camel(nm); pattern = kTypePattern; break;
        case Attribute::MethodName: ok = member_name_ok(nm, true); pattern = kMethodPattern; break;
        case Attribute::MemberName: ok = member_name_ok(nm, false); pattern = kMemberPattern; break;
        default: ok = local_name_ok(nm); break;
      }
      if (!ok) {
        c_.add(r, a, d.name, "Name '" + std::string(nm) + "' must match pattern '" + pattern + "'.");
      } else if (a == Attribute::MethodName && d.enclosing_type_name != npos && nm == c_.text(d.enclosing_type_name)) {
        c_.add(r, a, d.name, "Method Name '" + std::string(nm) + "' must not equal the enclosing class name.");
      }
    }
    return r;
  }

  CheckResult whitespace_around() const {
    CheckResult r;
    static constexpr std::array kKeywords = {"if",     "else",  "for",    "while",        "do",     "try",
                                             "catch",  "finally", "switch", "synchronized", "return", "assert"};
    for (const std::size_t t : tree_.code) {
      const auto s = c_.text(t);
      const auto role = c_.role(t);
      const auto kind = c_.tok(t).kind;
      bool candidate = false;
      bool check_before = true;
      bool check_after = true;
      if (role == TokenRole::Assignment || role == TokenRole::TernaryQuestion || role == TokenRole::TernaryColon ||
          role == TokenRole::ForEachColon || role == TokenRole::AssertColon || role == TokenRole::Lambda ||
          role == TokenRole::TypeBoundAnd) {
        candidate = true;
      } else if (role == TokenRole::BinaryOperator) {
        candidate = s != "instanceof";
      } else if (kind == TokenKind::Keyword && std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end()) {
        candidate = true;
        if (s == "return" && c_.text(c_.next_code(t)) == ";") check_after = false;
      } else if (kind == TokenKind::Separator && (s == "{" || s == "}") && role != TokenRole::ArrayInitBrace) {
        const int b = s == "{" ? block_of_open_[t] : block_of_close_[t];
        if (b >= 0) {
          const Block& blk = tree_.blocks[static_cast<std::size_t>(b)];
          if (empty_allowed(blk) || (s == "{" && blk.owner == BlockOwner::Plain && is_case_block(b)) ||
              double_brace(blk)) {
            continue;
          }
        }
        candidate = true;
        if (s == "}") {
          const char after = c_.char_after(t);
          if (after == ')' || after == ';' || after == ',' || after == '.') check_after = false;
        }
      }
      if (!candidate) continue;
      ++r.opportunities;
      const char before = c_.char_before(t);
      const char after = c_.char_after(t);
      const bool bad_before = check_before && before != 0 && !is_space(before);
      const bool bad_after = check_after && after != 0 && !is_space(after);
      if (bad_before || bad_after) {
        const std::string what = "'" + std::string(s) + "' is not ";
        std::string msg = bad_before ? what + "preceded with whitespace." : what + "followed by whitespace.";
        if (bad_before && bad_after) msg = what + "preceded or followed by whitespace.";
        c_.add(r, Attribute::WhitespaceAround, t, msg);
      }
    }
    return r;
  }

  bool empty_allowed(const Block& blk) const {
    if (!c_.block_empty(blk)) return false;
    switch (blk.owner) {
      case BlockOwner::Method:
      case BlockOwner::Constructor:
      case BlockOwner::Type:
      case BlockOwner::AnonymousClass:
      case BlockOwner::EnumConstant:
      case BlockOwner::For:
      case BlockOwner::While:
      case BlockOwner::Do:
      case BlockOwner::Lambda:
        return true;
      default:
        return false;
    }
  }

  // Instance initializer directly inside an anonymous class body: `{{`.
  bool double_brace(const Block& blk) const {
    if (blk.owner != BlockOwner::InstanceInit || blk.parent < 0) return false;
    const Block& outer = tree_.blocks[static_cast<std::size_t>(blk.parent)];
    return outer.owner == BlockOwner::AnonymousClass && c_.next_code(outer.open) == blk.open;
  }

  CheckResult generic_whitespace() const {
    CheckResult r;
    std::vector<std::size_t> opens;
    const std::string_view text = c_.src().text();
    for (const std::size_t t : tree_.code) {
      const auto role = c_.role(t);
      if (role == TokenRole::GenericOpen) {
        ++r.opportunities;
        opens.push_back(t);
        const std::size_t prev = c_.prev_code(t);
        const auto pt = c_.text(prev);
        const bool method_def = prev == npos || pt == "{" || pt == "}" || pt == ";" || pt == ")" ||
                                (c_.tok(prev).kind == TokenKind::Keyword && modifier_rank(pt) >= 0);
        const char before = c_.char_before(t);
        const char after = c_.char_after(t);
        std::string msg;
        if (before != 0) {
          if (method_def) {
            if (!is_space(before)) msg = "'<' is not preceded with whitespace.";
          } else if (is_space(before) && !c_.only_space_before(t)) {
            msg = "'<' is preceded with whitespace.";
          }
        }
        if (msg.empty() && after != 0 && is_space(after)) msg = "'<' is followed by whitespace.";
        if (!msg.empty()) c_.add(r, Attribute::GenericWhitespace, t, msg);
        continue;
      }
      if (role != TokenRole::GenericClose) continue;
      const int closes = tree_.generic_closes[t];
      const Token& tk = c_.tok(t);
      for (int i = 0; i < closes; ++i) {
        ++r.opportunities;
        const std::size_t depth = opens.size();
        const std::size_t open = opens.empty() ? npos : opens.back();
        if (!opens.empty()) opens.pop_back();
        const std::size_t off = tk.offset + static_cast<std::size_t>(i);
        const char before = i > 0 ? '>' : c_.char_before(t);
        const char after = (off + 1 < text.size() && !is_eol(text[off + 1])) ? text[off + 1] : 0;
        std::string msg;
        if (before != 0 && is_space(before) && !(i == 0 && c_.only_space_before(t))) {
          msg = "'>' is preceded with whitespace.";
        } else if (after != 0) {
          if (depth > 1) {
            // Nested: '>' may only be followed by '>' ',' or ' &' (type bound).
            std::size_t amp = off + 1;
            while (amp < text.size() && is_space(text[amp])) ++amp;
            if (amp < text.size() && text[amp] == '&' && amp != off + 1) {
              if (amp - (off + 1) != 1) msg = "'>' is followed by whitespace.";
            } else if (after == ' ') {
              msg = "'>' is followed by whitespace.";
            }
          } else {
            const std::size_t before_open = open == npos ? npos : c_.prev_code(open);
            const auto bo = c_.text(before_open);
            const bool before_method = bo == "." || bo == "new";
            if (before_method) {
              if (is_space(after)) msg = "'>' is followed by whitespace.";
            } else if (!(after == '(' || after == ')' || after == ',' || after == '[' || after == '.' || after == ':' ||
                         after == ';' || is_space(after))) {
              msg = "'>' is followed by an illegal character.";
            }
          }
        }
        if (!msg.empty()) {
          r.violations.push_back(Violation{Attribute::GenericWhitespace, tk.line, tk.column + i, msg});
        }
      }
    }
    return r;
  }

  // --- indentation ----------------------------------------------------------

  int indent_of_line(int line) const {
    const auto s = c_.src().lines()[line];
    std::size_t k = 0;
    while (k < s.size() && is_space(s[k])) ++k;
    return java::expanded_width(s.substr(0, k), kTabWidth);
  }

  // Nearest statement/member start at or before t, skipping closed groups.
  std::size_t statement_start(std::size_t t) const {
    std::size_t cur = t;
    while (cur != npos) {
      if (tree_.starts_statement[cur] && cur != t) return cur;
      const auto s = c_.text(cur);
      if ((s == ")" || s == "]" || s == "}") && match_[cur] != npos && cur != t) {
        cur = match_[cur];
        if (tree_.starts_statement[cur]) return cur;
      }
      cur = c_.prev_code(cur);
    }
    return npos;
  }

  // Accepted indentation: base, base + 2, ..., base + spread.
  struct Level {
    int base = kUnset;
    int spread = 0;
    Level operator+(int d) const { return {base + d, spread}; }
    bool accepts(int n) const { return n >= base && n <= base + spread && (n - base) % 2 == 0; }
  };

  // Expected level of the statement or member starting at t. Nesting follows
  // expected levels; lambda and initializer bodies follow the actual start of
  // the line that opens them, anonymous class bodies accept a range above it.
  Level expected_level(std::size_t t, std::vector<Level>& memo) const {
    if (memo[t].base != kUnset) return memo[t];
    Level e{0, 0};
    const Statement* ps = unbraced_body(t);
    const int b = innermost_[t];
    if (ps != nullptr) {
      const bool chained = ps->kind == StatementKind::Labeled || c_.text(c_.prev_code(t)) == "else";
      e = expected_level(ps->first, memo) + (chained ? 0 : 2);
    } else if (b >= 0) {
      const Block& blk = tree_.blocks[static_cast<std::size_t>(b)];
      const auto s = c_.text(t);
      e = header_level(b, memo) + 2;
      if (blk.owner == BlockOwner::Switch && s != "case" && s != "default") e = e + 2;
      if (blk.owner == BlockOwner::Switch && s == "default" && c_.text(c_.next_code(t)) != ":" &&
          c_.text(c_.next_code(t)) != "->") {
        e = e + 2;
      }
    }
    memo[t] = e;
    return e;
  }

  // True when t sits inside parentheses or brackets opened after start.
  bool inside_group(std::size_t t, std::size_t start) const {
    for (std::size_t cur = c_.prev_code(t); cur != npos && cur > start; cur = c_.prev_code(cur)) {
      const auto s = c_.text(cur);
      if ((s == ")" || s == "]") && match_[cur] != npos) {
        cur = match_[cur];
        continue;
      }
      if (s == "(" || s == "[") return true;
    }
    return false;
  }

  // Owning control statement when t starts its unbraced body.
  const Statement* unbraced_body(std::size_t t) const {
    const int si = stmt_by_first_[t];
    const int parent = si >= 0 ? tree_.statements[static_cast<std::size_t>(si)].parent : -1;
    if (parent < 0 || c_.text(t) == "{") return nullptr;
    const Statement& ps = tree_.statements[static_cast<std::size_t>(parent)];
    return ps.kind != StatementKind::Block && ps.kind != StatementKind::Switch ? &ps : nullptr;
  }

  Level header_level(int b, std::vector<Level>& memo) const {
    const Block& blk = tree_.blocks[static_cast<std::size_t>(b)];
    const std::size_t start = statement_start(blk.open);
    if (start == npos) return {0, 0};
    switch (blk.owner) {
      case BlockOwner::AnonymousClass:
        return {indent_of_line(c_.line(start)), 4};
      case BlockOwner::Lambda:
      case BlockOwner::ArrayInit:
        return {indent_of_line(c_.line(start)), 0};
      default:
        return expected_level(start, memo);
    }
  }

  CheckResult indentation() const {
    CheckResult r;
    r.opportunities = c_.line_count();
    std::vector<Level> memo(c_.toks().size());
    std::vector<std::size_t> first_on_line(static_cast<std::size_t>(c_.line_count()) + 2, npos);
    std::vector<bool> comment_first(first_on_line.size(), false);
    for (std::size_t t = 0; t < c_.toks().size(); ++t) {
      const auto k = c_.tok(t).kind;
      if (k == TokenKind::Whitespace || k == TokenKind::Newline) continue;
      const auto l = static_cast<std::size_t>(c_.line(t));
      if (l < first_on_line.size() && first_on_line[l] == npos && !comment_first[l]) {
        if (k == TokenKind::Comment) {
          comment_first[l] = true;
        } else if (c_.only_space_before(t)) {
          first_on_line[l] = t;
        }
      }
    }
    std::vector<bool> after_annotation(c_.toks().size(), false);
    for (const auto& d : tree_.declarations) {
      for (const auto& m : d.modifiers) {
        if (m.annotation && c_.next_code(m.last) != npos) after_annotation[c_.next_code(m.last)] = true;
      }
    }
    std::vector<bool> in_enum_constants(c_.toks().size(), false);
    for (const auto& m : tree_.members) {
      if (m.kind != MemberKind::EnumConstants) continue;
      for (std::size_t t = m.first; t <= m.last && t < in_enum_constants.size(); ++t) in_enum_constants[t] = true;
    }
    for (int l = 1; l <= c_.line_count(); ++l) {
      const std::size_t t = first_on_line[static_cast<std::size_t>(l)];
      if (t == npos) continue;
      const int actual = indent_of_line(l);
      const auto s = c_.text(t);
      const int b = innermost_[t];
      Level expected;
      bool strict = true;
      if (block_of_close_[t] >= 0) {
        const Block& blk = tree_.blocks[static_cast<std::size_t>(block_of_close_[t])];
        if (blk.owner == BlockOwner::ArrayInit) continue;
        expected = header_level(block_of_close_[t], memo);
        if (blk.owner == BlockOwner::AnonymousClass) expected.spread = 0;
      } else if (s == "else" || s == "catch" || s == "finally" ||
                 (s == "while" && tree_.starts_statement[t] && stmt_by_first_[t] < 0)) {
        const std::size_t start = statement_start(t);
        expected = start == npos ? Level{0, 0} : expected_level(start, memo);
        // The owning statement is the if/try/do this keyword continues.
        for (const Control& ctl : tree_.controls) {
          if (ctl.next_part == t) {
            std::size_t k = ctl.keyword;
            while (k != npos && !tree_.starts_statement[k]) k = c_.prev_code(k);
            expected = k == npos ? Level{0, 0} : expected_level(k, memo);
            break;
          }
        }
      } else if (block_of_open_[t] >= 0 && !tree_.starts_statement[t]) {
        const BlockOwner o = tree_.blocks[static_cast<std::size_t>(block_of_open_[t])].owner;
        if (o == BlockOwner::ArrayInit || o == BlockOwner::Lambda || o == BlockOwner::AnonymousClass) continue;
        expected = header_level(block_of_open_[t], memo);
      } else if (tree_.starts_statement[t]) {
        if (b >= 0 && tree_.blocks[static_cast<std::size_t>(b)].owner == BlockOwner::ArrayInit) continue;
        if (in_enum_constants[t]) continue;
        expected = expected_level(t, memo);
        strict = !unbraced_body(t);
      } else {
        if (s == ")" || s == "]" || s == "}") continue;
        if (after_annotation[t] || s == ";") continue;
        strict = false;
        const std::size_t start = statement_start(t);
        const int base = start == npos ? 0 : indent_of_line(c_.line(start));
        expected = Level{base, 0} +
                   (b >= 0 && tree_.blocks[static_cast<std::size_t>(b)].owner == BlockOwner::ArrayInit ? 2 : 4);
        const int si = start == npos ? -1 : stmt_by_first_[start];
        const StatementKind sk = si >= 0 ? tree_.statements[static_cast<std::size_t>(si)].kind : StatementKind::Empty;
        if (sk == StatementKind::Throw || sk == StatementKind::Assert) continue;
        if ((sk == StatementKind::Expression || sk == StatementKind::Return) && !inside_group(t, start)) {
          if (s == "." || c_.text(c_.prev_code(t)) == ".") continue;
          expected = Level{expected_level(start, memo).base + 2, 0};
        }
      }
      if (expected.base == kUnset) continue;
      if (strict ? !expected.accepts(actual) : actual < expected.base) {
        std::string want = std::to_string(expected.base);
        if (!strict) {
          want = "at least " + want;
        } else if (expected.spread > 0) {
          want = "one of the following: " + want;
          for (int d = 2; d <= expected.spread; d += 2) want += ", " + std::to_string(expected.base + d);
        }
        r.violations.push_back(Violation{Attribute::Indentation, l, 1,
                                         "'" + std::string(s) + "' has incorrect indentation level " +
                                             std::to_string(actual) + ", expected level should be " + want + "."});
      }
    }
    return r;
  }

 private:
  const Ctx& c_;
  const java::StructureTree& tree_;
  std::vector<int> block_of_open_;
  std::vector<int> block_of_close_;
  std::vector<int> innermost_;
  std::vector<int> stmt_by_first_;
  std::vector<std::size_t> match_;
};

CheckResult dispatch(Attribute a, const ParsedSource& src) {
  if (a == Attribute::LineLength) return check_line_length(src);
  if (src.lex_failed()) return {};
  if (info(a).structural && src.tree().unbalanced) return {};
  const Ctx c(src);
  switch (a) {
    case Attribute::UpperEll: return check_upper_ell(c);
    case Attribute::AvoidStarImport: return check_avoid_star_import(c);
    case Attribute::NoLineWrap: return check_no_line_wrap(c);
    case Attribute::SeparatorWrap: return check_separator_wrap(c);
    case Attribute::OperatorWrap: return check_operator_wrap(c);
    default: break;
  }
  const StructureChecks s(c);
  switch (a) {
    case Attribute::OneTopLevelClass: return s.one_top_level_class();
    case Attribute::EmptyLineSeparator: return s.empty_line_separator();
    case Attribute::RightCurly: return s.right_curly();
    case Attribute::WhitespaceAround: return s.whitespace_around();
    case Attribute::GenericWhitespace: return s.generic_whitespace();
    case Attribute::LeftCurly: return s.left_curly();
    case Attribute::EmptyBlock: return s.empty_block();
    case Attribute::NeedBraces: return s.need_braces();
    case Attribute::MultipleVariableDeclarations: return s.multiple_variable_declarations();
    case Attribute::OneStatementPerLine: return s.one_statement_per_line();
    case Attribute::ModifierOrder: return s.modifier_order();
    case Attribute::FallThrough: return s.fall_through();
    case Attribute::MissingSwitchDefault: return s.missing_switch_default();
    case Attribute::TypeName:
    case Attribute::MethodName:
    case Attribute::MemberName:
    case Attribute::ParameterName:
    case Attribute::LocalVariableName:
      return s.naming(a);
    case Attribute::Indentation: return s.indentation();
    default: return {};
  }
}

bool violation_less(const Violation& a, const Violation& b) {
  if (a.line != b.line) return a.line < b.line;
  if (a.column != b.column) return a.column < b.column;
  return index(a.attribute) < index(b.attribute);
}

}  // namespace

const std::array<AttributeInfo, kAttributeCount>& attribute_table() { return kTable; }

const AttributeInfo& info(Attribute a) { return kTable[static_cast<std::size_t>(index(a))]; }

std::string_view name(Attribute a) { return info(a).name; }

std::optional<Attribute> attribute_from_name(std::string_view n) {
  for (const auto& i : kTable) {
    if (i.name == n) return i.id;
  }
  return std::nullopt;
}

std::vector<Attribute> AttributeSet::members() const {
  std::vector<Attribute> out;
  for (const auto& i : kTable) {
    if (contains(i.id)) out.push_back(i.id);
  }
  return out;
}

int CheckReport::count(Attribute a) const {
  return static_cast<int>(
      std::count_if(violations.begin(), violations.end(), [a](const Violation& v) { return v.attribute == a; }));
}

ParsedSource::ParsedSource(std::string source) : text_(std::move(source)), lines_(text_) {
  try {
    tokens_ = java::tokenize(text_);
    tree_ = java::parse_structure(tokens_);
  } catch (const java::LexError& e) {
    lex_failed_ = true;
    lex_error_ = e.what();
    tokens_.clear();
  }
}

CheckResult run_check(Attribute attribute, const ParsedSource& src) {
  CheckResult r = dispatch(attribute, src);
  std::sort(r.violations.begin(), r.violations.end(), violation_less);
  return r;
}

CheckReport run_all(std::string_view source, std::string file) {
  const ParsedSource src{std::string(source)};
  CheckReport report;
  report.file = std::move(file);
  report.unparseable = !src.structured();
  if (src.lex_failed()) {
    report.diagnostic = src.lex_error();
  } else if (src.tree().unbalanced) {
    report.diagnostic = "unbalanced braces";
  }
  for (const auto& i : kTable) {
    CheckResult r = dispatch(i.id, src);
    report.opportunities[static_cast<std::size_t>(index(i.id))] = r.opportunities;
    for (auto& v : r.violations) report.violations.push_back(std::move(v));
  }
  std::sort(report.violations.begin(), report.violations.end(), violation_less);
  return report;
}

AttributeSet extract_attributes(const CheckReport& report) {
  AttributeSet s;
  for (const auto& v : report.violations) s.insert(v.attribute);
  return s;
}

}  // namespace stylemetric
