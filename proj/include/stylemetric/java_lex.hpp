#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stylemetric::java {

enum class TokenKind : std::uint8_t {
  Keyword,
  Identifier,
  IntLiteral,
  LongLiteral,
  FloatLiteral,
  StringLiteral,
  CharLiteral,
  Operator,
  Separator,
  Comment,
  Whitespace,
  Newline,
};

std::string_view to_string(TokenKind kind);

/// A lexical token. `text` is a view into the source passed to tokenize(),
/// so the source must outlive the token list.
struct Token {
  TokenKind kind;
  std::string_view text;
  int line;    // 1-based
  int column;  // 1-based, counted in code points
  std::size_t offset;

  bool is(std::string_view s) const { return text == s; }
  bool trivia() const {
    return kind == TokenKind::Whitespace || kind == TokenKind::Newline || kind == TokenKind::Comment;
  }
};

class LexError : public std::runtime_error {
 public:
  LexError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class LexMode {
  Strict,   // unterminated literals and comments throw LexError
  Lenient,  // unterminated literals run to end of line, comments to end of input
};

/// Lossless Java 8 tokenizer: concatenating every token's text reproduces
/// the input exactly. Throws LexError on invalid UTF-8 and, in strict mode,
/// on unterminated string/char literals and block comments.
std::vector<Token> tokenize(std::string_view source, LexMode mode = LexMode::Strict);

/// Code tokens only (no whitespace, newlines or comments), lenient lexing.
std::vector<std::string> code_token_texts(std::string_view source);

bool is_keyword(std::string_view word);

// ---------------------------------------------------------------------------
// Structure

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

enum class BlockKind : std::uint8_t { ClassBody, MethodBody, ControlBody, SwitchBody, Other };

enum class BlockOwner : std::uint8_t {
  Type,
  AnonymousClass,
  EnumConstant,
  Method,
  Constructor,
  StaticInit,
  InstanceInit,
  Lambda,
  If,
  Else,
  For,
  While,
  Do,
  Try,
  Catch,
  Finally,
  Synchronized,
  Switch,
  Plain,
  ArrayInit,
};

struct Block {
  BlockKind kind;
  BlockOwner owner;
  std::size_t open;   // token index of '{'
  std::size_t close;  // token index of '}', npos when unbalanced
  int parent;         // enclosing block, -1 at top level
  std::size_t keyword = npos;  // owning keyword/name token where one exists
};

enum class DeclKind : std::uint8_t {
  Type,
  Method,
  Constructor,
  Field,
  Parameter,
  CatchParameter,
  LocalVariable,
};

enum class TypeKeyword : std::uint8_t { None, Class, Interface, Enum, Annotation };

struct Modifier {
  std::size_t token;      // keyword token, or '@' for annotations
  std::size_t last;       // last token of the modifier (annotation args)
  bool annotation;
};

struct Declaration {
  DeclKind kind;
  std::size_t name;        // identifier token
  std::size_t first;       // first token including modifiers
  std::vector<Modifier> modifiers;
  int block = -1;          // innermost enclosing block
  int statement = -1;      // owning declaration statement (fields and locals)
  int declarator = 0;      // position inside a multi-declarator statement
  bool is_static = false;
  bool is_final = false;
  bool in_interface = false;  // member of an interface or annotation type
  TypeKeyword type_keyword = TypeKeyword::None;
  std::size_t enclosing_type_name = npos;  // for methods and fields
};

struct Import {
  std::string path;   // without the trailing ".*"
  bool star = false;
  bool is_static = false;
  std::size_t first;  // 'import' token
  std::size_t last;   // ';' token
  int line = 0;
};

struct PackageDecl {
  std::string name;
  std::size_t first = npos;
  std::size_t last = npos;
};

enum class StatementKind : std::uint8_t {
  Block,
  LocalVariable,
  LocalClass,
  Expression,
  If,
  For,
  ForEach,
  While,
  Do,
  Try,
  Switch,
  Synchronized,
  Return,
  Throw,
  Break,
  Continue,
  Yield,
  Assert,
  Labeled,
  Empty,
  ExplicitCtorCall,
  FieldDecl,  // member-level variable declaration, tracked for line checks
};

/// One statement. Compound statements reference their children by index
/// into StructureTree::statements.
struct Statement {
  StatementKind kind;
  std::size_t first;  // first code token
  std::size_t last;   // last code token (';' or '}')
  int parent = -1;
  // If: children = {then, else?}; loops/labeled/synchronized: {body};
  // Block: contained statements; Try: {try-block, catch-blocks..., finally?}
  std::vector<int> children;
  bool has_else = false;
  bool has_finally = false;
  int switch_index = -1;      // for Switch
  int block = -1;             // block opened by this statement where relevant
  std::size_t label = npos;   // break/continue label token
  int declarators = 0;        // LocalVariable / FieldDecl
  bool in_for_init = false;
};

struct SwitchArm {
  std::vector<std::size_t> labels;  // 'case' / 'default' tokens
  bool has_default = false;
  bool arrow = false;
  std::vector<int> statements;
  std::size_t end = npos;  // last token belonging to the arm
};

struct Switch {
  std::size_t keyword;
  int block = -1;
  std::vector<SwitchArm> arms;
  bool has_default = false;
};

enum class ControlKind : std::uint8_t { If, Else, For, While, DoWhile, Try, Catch, Finally, Switch, Synchronized };

/// A control keyword and the statement it governs.
struct Control {
  ControlKind kind;
  std::size_t keyword;
  bool braced = false;
  int block = -1;                   // body block when braced
  std::size_t body_first = npos;    // first token of the body statement
  std::size_t body_last = npos;
  bool empty_body = false;          // body is a lone ';'
  std::size_t next_part = npos;     // else/catch/finally/while continuing this statement
  std::size_t after = npos;         // first code token after the whole statement
  bool else_if = false;             // 'else' directly followed by 'if'
};

enum class MemberKind : std::uint8_t {
  Package,
  Import,
  StaticImport,
  Type,
  Field,
  Method,
  Constructor,
  StaticInit,
  InstanceInit,
  EnumConstants,
  Empty,
};

/// Top-level element of a compilation unit or class body, in source order.
struct Member {
  MemberKind kind;
  int container;       // class-body block, -1 for the compilation unit
  std::size_t first;   // first code token (annotations included)
  std::size_t last;
  int statement = -1;  // FieldDecl statement for fields
};

enum class TokenRole : std::uint8_t {
  None,
  BinaryOperator,
  UnaryOperator,
  Assignment,
  GenericOpen,
  GenericClose,      // may span '>>' / '>>>' tokens
  TernaryQuestion,
  TernaryColon,
  CaseColon,
  LabelColon,
  ForEachColon,
  AssertColon,
  Wildcard,
  TypeBoundAnd,
  ImportStar,
  ArrayInitBrace,
  AnnotationAt,
  MethodRef,
  Lambda,
};

struct StructureTree {
  std::vector<std::size_t> code;        // indices of non-trivia tokens
  std::vector<Block> blocks;
  std::vector<Declaration> declarations;
  std::vector<Import> imports;
  PackageDecl package;
  std::vector<Statement> statements;
  std::vector<Switch> switches;
  std::vector<Control> controls;
  std::vector<Member> members;
  std::vector<TokenRole> roles;         // per token (parallel to the token list)
  // Number of generic '>' closings carried by each token (0 for most).
  std::vector<std::uint8_t> generic_closes;
  // Tokens that begin a statement, member, case label or annotation line.
  std::vector<bool> starts_statement;
  bool unbalanced = false;
};

/// Best-effort structural parse. Never throws on malformed code; brace
/// mismatches set `unbalanced`.
StructureTree parse_structure(const std::vector<Token>& tokens);

/// Line-indexed view of a source (1-based access; no line terminators).
class SourceLines {
 public:
  explicit SourceLines(std::string_view source);
  std::size_t size() const { return lines_.size(); }
  std::string_view operator[](int line) const;  // 1-based

 private:
  std::vector<std::string_view> lines_;
};

/// Code-point count of `s` with tabs expanded to the next multiple of
/// `tab_width`.
int expanded_width(std::string_view s, int tab_width);

}  // namespace stylemetric::java
