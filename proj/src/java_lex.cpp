#include "stylemetric/java_lex.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace stylemetric::java {

namespace {

constexpr std::array kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",     "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",  "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",  "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",     "interface",
    "long",     "native",     "new",       "package",   "private",  "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",    "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",      "void",      "volatile",
    "while",    "true",       "false",     "null",
};

// Longest first so that maximal munch falls out of a linear scan.
constexpr std::array kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
    ">=",   "+=",  "-=",  "*=",  "/=",  "&=", "|=", "^=", "%=", "<<", ">>",
};

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_hex_digit(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Length of the UTF-8 sequence starting at s[i], or 0 if it is malformed.
std::size_t utf8_length(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (cc & 0x3F);
  }
  // Overlong encodings, surrogates and out-of-range code points.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return 0;
  }
  return len;
}

class Lexer {
 public:
  Lexer(std::string_view src, LexMode mode) : src_(src), mode_(mode) {}

  std::vector<Token> run() {
    validate_utf8();
    while (pos_ < src_.size()) next();
    return std::move(tokens_);
  }

 private:
  void validate_utf8() {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < src_.size();) {
      const std::size_t len = utf8_length(src_, i);
      if (len == 0) throw LexError("invalid UTF-8 byte sequence", line, col);
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      i += len;
    }
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void emit(TokenKind kind, std::size_t end) {
    tokens_.push_back(Token{kind, src_.substr(pos_, end - pos_), line_, col_, pos_});
    // Advance line/column over the token text.
    for (std::size_t i = pos_; i < end; ++i) {
      const char c = src_[i];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if (c == '\r') {
        if (i + 1 < end && src_[i + 1] == '\n') continue;
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++col_;
      }
    }
    pos_ = end;
  }

  void next() {
    const char c = peek();
    if (c == '\n') return emit(TokenKind::Newline, pos_ + 1);
    if (c == '\r') return emit(TokenKind::Newline, pos_ + (peek(1) == '\n' ? 2 : 1));
    if (c == ' ' || c == '\t' || c == '\f') {
      std::size_t end = pos_;
      while (end < src_.size() && (src_[end] == ' ' || src_[end] == '\t' || src_[end] == '\f')) ++end;
      return emit(TokenKind::Whitespace, end);
    }
    if (src_.substr(pos_, 3) == "\xEF\xBB\xBF") return emit(TokenKind::Whitespace, pos_ + 3);
    if (c == '/' && peek(1) == '/') {
      std::size_t end = pos_;
      while (end < src_.size() && src_[end] != '\n' && src_[end] != '\r') ++end;
      return emit(TokenKind::Comment, end);
    }
    if (c == '/' && peek(1) == '*') {
      const std::size_t close = src_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) {
        if (mode_ == LexMode::Strict) throw LexError("unterminated comment", line_, col_);
        return emit(TokenKind::Comment, src_.size());
      }
      return emit(TokenKind::Comment, close + 2);
    }
    if (c == '"' || c == '\'') return quoted(c);
    if (is_digit(static_cast<unsigned char>(c)) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
      return number();
    }
    if (is_ident_start(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < src_.size() && is_ident_part(static_cast<unsigned char>(src_[end]))) ++end;
      const auto word = src_.substr(pos_, end - pos_);
      return emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, end);
    }
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        const bool sep = op == "..." || op == "::";
        return emit(sep ? TokenKind::Separator : TokenKind::Operator, pos_ + op.size());
      }
    }
    switch (c) {
      case '(': case ')': case '{': case '}': case '[': case ']':
      case ';': case ',': case '.': case '@':
        return emit(TokenKind::Separator, pos_ + 1);
      default:
        break;
    }
    // Everything else (operators and stray characters) is one code point.
    return emit(TokenKind::Operator, pos_ + std::max<std::size_t>(1, utf8_length(src_, pos_)));
  }

  void quoted(char quote) {
    std::size_t end = pos_ + 1;
    while (end < src_.size()) {
      const char c = src_[end];
      if (c == quote) {
        return emit(quote == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, end + 1);
      }
      if (c == '\n' || c == '\r') break;
      if (c == '\\') {
        if (end + 1 < src_.size() && src_[end + 1] != '\n' && src_[end + 1] != '\r') {
          end += 2;
          continue;
        }
        ++end;
        break;
      }
      ++end;
    }
    if (mode_ == LexMode::Strict) {
      throw LexError(quote == '"' ? "unterminated string literal" : "unterminated character literal",
                     line_, col_);
    }
    while (end < src_.size() && src_[end] != '\n' && src_[end] != '\r') ++end;
    emit(quote == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, end);
  }

  void number() {
    std::size_t end = pos_;
    bool floating = false;
    auto digits = [&](auto pred) {
      while (end < src_.size() && (pred(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
    };
    const char c1 = peek(1);
    if (peek() == '0' && (c1 == 'x' || c1 == 'X')) {
      end += 2;
      digits(is_hex_digit);
      if (end < src_.size() && src_[end] == '.') {
        floating = true;
        ++end;
        digits(is_hex_digit);
      }
      if (end < src_.size() && (src_[end] == 'p' || src_[end] == 'P')) {
        floating = true;
        ++end;
        if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
        digits(is_digit);
      }
    } else if (peek() == '0' && (c1 == 'b' || c1 == 'B')) {
      end += 2;
      digits(is_digit);
    } else {
      digits(is_digit);
      if (end < src_.size() && src_[end] == '.' &&
          !(end + 1 < src_.size() && src_[end + 1] == '.')) {
        floating = true;
        ++end;
        digits(is_digit);
      }
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        floating = true;
        ++end;
        if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
        digits(is_digit);
      }
    }
    TokenKind kind = floating ? TokenKind::FloatLiteral : TokenKind::IntLiteral;
    if (end < src_.size()) {
      const char s = src_[end];
      if (!floating && (s == 'l' || s == 'L')) {
        kind = TokenKind::LongLiteral;
        ++end;
      } else if (s == 'f' || s == 'F' || s == 'd' || s == 'D') {
        kind = TokenKind::FloatLiteral;
        ++end;
      }
    }
    emit(kind, end);
  }

  std::string_view src_;
  LexMode mode_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<Token> tokens_;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "literal-int";
    case TokenKind::LongLiteral: return "literal-long";
    case TokenKind::FloatLiteral: return "literal-float";
    case TokenKind::StringLiteral: return "literal-string";
    case TokenKind::CharLiteral: return "literal-char";
    case TokenKind::Operator: return "operator";
    case TokenKind::Separator: return "separator";
    case TokenKind::Comment: return "comment";
    case TokenKind::Whitespace: return "whitespace";
    case TokenKind::Newline: return "newline";
  }
  return "unknown";
}

LexError::LexError(const std::string& what, int line, int column)
    : std::runtime_error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source, LexMode mode) { return Lexer(source, mode).run(); }

std::vector<std::string> code_token_texts(std::string_view source) {
  std::vector<std::string> out;
  std::vector<Token> tokens;
  try {
    tokens = tokenize(source, LexMode::Lenient);
  } catch (const LexError&) {
    // Invalid UTF-8: fall back to whitespace-separated words.
    std::size_t i = 0;
    while (i < source.size()) {
      while (i < source.size() && std::isspace(static_cast<unsigned char>(source[i]))) ++i;
      const std::size_t start = i;
      while (i < source.size() && !std::isspace(static_cast<unsigned char>(source[i]))) ++i;
      if (i > start) out.emplace_back(source.substr(start, i - start));
    }
    return out;
  }
  for (const auto& t : tokens) {
    if (!t.trivia()) out.emplace_back(t.text);
  }
  return out;
}

SourceLines::SourceLines(std::string_view source) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == '\n' || source[i] == '\r') {
      lines_.push_back(source.substr(start, i - start));
      if (source[i] == '\r' && i + 1 < source.size() && source[i + 1] == '\n') ++i;
      start = i + 1;
    }
  }
  if (start < source.size()) lines_.push_back(source.substr(start));
}

std::string_view SourceLines::operator[](int line) const {
  if (line < 1 || static_cast<std::size_t>(line) > lines_.size()) return {};
  return lines_[static_cast<std::size_t>(line - 1)];
}

int expanded_width(std::string_view s, int tab_width) {
  int width = 0;
  for (const char c : s) {
    if (c == '\t') {
      width += tab_width - (width % tab_width);
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++width;
    }
  }
  return width;
}

}  // namespace stylemetric::java
