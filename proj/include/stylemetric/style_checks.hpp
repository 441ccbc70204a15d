#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylemetric/java_lex.hpp"

namespace stylemetric {

// Declaration order is the criterion order; the first 24 carry css_index
// 1..24 in this order.
enum class Attribute : std::uint8_t {
  NoLineWrap,
  AvoidStarImport,
  OneTopLevelClass,
  EmptyLineSeparator,
  RightCurly,
  SeparatorWrap,
  WhitespaceAround,
  GenericWhitespace,
  OperatorWrap,
  LineLength,
  LeftCurly,
  EmptyBlock,
  NeedBraces,
  MultipleVariableDeclarations,
  OneStatementPerLine,
  UpperEll,
  ModifierOrder,
  FallThrough,
  MissingSwitchDefault,
  TypeName,
  MethodName,
  MemberName,
  ParameterName,
  LocalVariableName,
  Indentation,
};

inline constexpr int kAttributeCount = 25;
inline constexpr int kCriteriaCount = 24;

enum class Aspect : std::uint8_t { Structure, Formatting, Naming, Base };

struct AttributeInfo {
  Attribute id;
  std::string_view name;
  Aspect aspect;
  int css_index;     // 1..24, 0 for Indentation
  bool syntax;       // syntax-style criterion (as opposed to semantic)
  bool structural;   // needs a balanced structure tree
};

const std::array<AttributeInfo, kAttributeCount>& attribute_table();
const AttributeInfo& info(Attribute a);
std::string_view name(Attribute a);
std::optional<Attribute> attribute_from_name(std::string_view name);
inline int index(Attribute a) { return static_cast<int>(a); }

/// Set of attributes as a bit mask.
class AttributeSet {
 public:
  AttributeSet() = default;
  explicit AttributeSet(std::uint32_t bits) : bits_(bits) {}

  void insert(Attribute a) { bits_ |= bit(a); }
  bool contains(Attribute a) const { return (bits_ & bit(a)) != 0; }
  int size() const { return __builtin_popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  std::uint32_t bits() const { return bits_; }
  std::vector<Attribute> members() const;  // in css order
  bool subset_of(AttributeSet o) const { return (bits_ & ~o.bits_) == 0; }
  bool operator==(const AttributeSet&) const = default;

 private:
  static std::uint32_t bit(Attribute a) { return std::uint32_t{1} << index(a); }
  std::uint32_t bits_ = 0;
};

struct Violation {
  Attribute attribute;
  int line;
  int column;
  std::string message;
};

struct CheckResult {
  std::vector<Violation> violations;
  int opportunities = 0;
};

struct CheckReport {
  std::string file;
  std::vector<Violation> violations;  // sorted by line, column, attribute
  std::array<int, kAttributeCount> opportunities{};
  bool unparseable = false;
  std::string diagnostic;  // lexer message or structure note when unparseable

  int count(Attribute a) const;
};

/// Lexed and parsed source shared by all checks. Keeps its own copy of the
/// text so token views stay valid.
class ParsedSource {
 public:
  explicit ParsedSource(std::string source);
  ParsedSource(const ParsedSource&) = delete;
  ParsedSource& operator=(const ParsedSource&) = delete;

  std::string_view text() const { return text_; }
  const std::vector<java::Token>& tokens() const { return tokens_; }
  const java::StructureTree& tree() const { return tree_; }
  const java::SourceLines& lines() const { return lines_; }
  bool lex_failed() const { return lex_failed_; }
  const std::string& lex_error() const { return lex_error_; }
  bool structured() const { return !lex_failed_ && !tree_.unbalanced; }

 private:
  std::string text_;
  std::vector<java::Token> tokens_;
  java::StructureTree tree_;
  java::SourceLines lines_;
  bool lex_failed_ = false;
  std::string lex_error_;
};

inline constexpr int kTabWidth = 4;
inline constexpr int kMaxLineLength = 100;

CheckResult run_check(Attribute attribute, const ParsedSource& src);
CheckReport run_all(std::string_view source, std::string file = {});

/// Attributes flagged at least once.
AttributeSet extract_attributes(const CheckReport& report);

}  // namespace stylemetric
