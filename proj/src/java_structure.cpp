// Best-effort recursive-descent walk over Java code tokens. It models just
// enough structure for the style checks: brace blocks, declarations,
// statements, switch arms and operator roles. Expressions are skipped token
// by token, descending only into lambda bodies, anonymous classes and array
// initializers.

#include <algorithm>
#include <array>
#include <initializer_list>

#include "stylemetric/java_lex.hpp"

namespace stylemetric::java {

namespace {

constexpr int kMaxDepth = 400;

struct TooDeep {};

constexpr std::array kModifierWords = {
    "public", "protected", "private", "abstract",     "static", "final",
    "transient", "volatile", "synchronized", "native", "strictfp", "default",
};

constexpr std::array kPrimitiveWords = {
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
};

template <std::size_t N>
bool contains(const std::array<const char*, N>& words, std::string_view w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

bool is_primitive(std::string_view w) { return contains(kPrimitiveWords, w); }

bool is_binary_operator_text(std::string_view t) {
  static constexpr std::array ops = {"*", "/", "%", "<<", ">>", ">>>", "<", ">", "<=", ">=",
                                     "==", "!=", "&", "^", "|", "&&", "||", "+", "-"};
  return contains(ops, t);
}

bool is_assignment_text(std::string_view t) {
  static constexpr std::array ops = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=",
                                     ">>=", ">>>="};
  return contains(ops, t);
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    tree_.roles.assign(tokens.size(), TokenRole::None);
    tree_.generic_closes.assign(tokens.size(), 0);
    tree_.starts_statement.assign(tokens.size(), false);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!tokens[i].trivia()) tree_.code.push_back(i);
    }
  }

  StructureTree run() {
    match_brackets();
    find_generics();
    try {
      parse_compilation_unit();
    } catch (const TooDeep&) {
      tree_.unbalanced = true;
    }
    assign_operator_roles();
    return std::move(tree_);
  }

 private:
  // --- token access -------------------------------------------------------

  std::size_t size() const { return tree_.code.size(); }
  bool eof() const { return pos_ >= size(); }
  std::size_t ti(std::size_t p) const { return p < size() ? tree_.code[p] : npos; }
  std::string_view text(std::size_t p) const {
    return p < size() ? toks_[tree_.code[p]].text : std::string_view{};
  }
  TokenKind kind(std::size_t p) const {
    return p < size() ? toks_[tree_.code[p]].kind : TokenKind::Whitespace;
  }
  bool at(std::string_view s, std::size_t ahead = 0) const { return text(pos_ + ahead) == s; }
  bool ident(std::size_t ahead = 0) const { return kind(pos_ + ahead) == TokenKind::Identifier; }
  TokenRole role(std::size_t p) const { return p < size() ? tree_.roles[tree_.code[p]] : TokenRole::None; }
  void set_role(std::size_t p, TokenRole r) {
    if (p < size()) tree_.roles[tree_.code[p]] = r;
  }
  void mark_start(std::size_t p) {
    if (p < size()) tree_.starts_statement[tree_.code[p]] = true;
  }
  // Index of the last consumed code token, as a token index.
  std::size_t last_consumed() const { return pos_ > 0 ? ti(pos_ - 1) : npos; }

  struct DepthGuard {
    explicit DepthGuard(int& d) : depth(d) {
      if (++depth > kMaxDepth) throw TooDeep{};
    }
    ~DepthGuard() { --depth; }
    int& depth;
  };

  // Jump past a bracket group starting at pos_.
  void skip_group() {
    const std::size_t m = match_[pos_];
    pos_ = m == npos ? pos_ + 1 : m + 1;
  }

  // --- pre-passes -----------------------------------------------------------

  void match_brackets() {
    match_.assign(size(), npos);
    std::vector<std::size_t> stack;
    auto opener_for = [](std::string_view c) {
      return c == ")" ? std::string_view("(") : c == "]" ? std::string_view("[") : std::string_view("{");
    };
    for (std::size_t p = 0; p < size(); ++p) {
      const auto t = text(p);
      if (kind(p) != TokenKind::Separator) continue;
      if (t == "(" || t == "[" || t == "{") {
        stack.push_back(p);
      } else if (t == ")" || t == "]" || t == "}") {
        const auto want = opener_for(t);
        if (!stack.empty() && text(stack.back()) == want) {
          match_[stack.back()] = p;
          match_[p] = stack.back();
          stack.pop_back();
          continue;
        }
        tree_.unbalanced = true;
        auto it = std::find_if(stack.rbegin(), stack.rend(), [&](std::size_t q) { return text(q) == want; });
        if (it != stack.rend()) {
          const std::size_t q = *it;
          stack.erase(std::next(it).base(), stack.end());
          match_[q] = p;
          match_[p] = q;
        }
      }
    }
    if (!stack.empty()) tree_.unbalanced = true;
  }

  bool generic_may_follow(std::size_t p) const {
    if (p == 0) return true;
    const auto prev = text(p - 1);
    const auto k = kind(p - 1);
    if (k == TokenKind::Identifier) return true;
    if (prev == "." || prev == "{" || prev == "}" || prev == ";" || prev == "::") return true;
    return k == TokenKind::Keyword && contains(kModifierWords, prev);
  }

  // Marks generic angle brackets. A '<' opens a generic when what follows up
  // to the balancing '>' can only be a type argument/parameter list.
  void find_generics() {
    generic_match_.assign(size(), npos);
    for (std::size_t p = 0; p < size(); ++p) {
      if (text(p) != "<" || role(p) == TokenRole::GenericOpen) continue;
      if (!generic_may_follow(p)) continue;
      std::vector<std::size_t> opens{p};
      std::vector<std::pair<std::size_t, std::size_t>> pairs;  // open -> closer
      std::vector<std::size_t> wildcards;
      std::vector<std::size_t> ands;
      bool ok = false;
      for (std::size_t q = p + 1; q < size(); ++q) {
        const auto t = text(q);
        const auto k = kind(q);
        if (t == "<") {
          if (kind(q - 1) != TokenKind::Identifier) break;
          opens.push_back(q);
          continue;
        }
        if (t == ">" || t == ">>" || t == ">>>") {
          const std::size_t n = t.size();
          if (n > opens.size()) break;
          for (std::size_t i = 0; i < n; ++i) {
            pairs.emplace_back(opens.back(), q);
            opens.pop_back();
          }
          tree_.generic_closes[ti(q)] = static_cast<std::uint8_t>(n);
          if (opens.empty()) {
            ok = true;
            break;
          }
          continue;
        }
        if (k == TokenKind::Identifier || t == "." || t == "," || t == "[" || t == "]" ||
            t == "extends" || t == "super" || is_primitive(t)) {
          continue;
        }
        if (t == "&") {
          ands.push_back(q);
          continue;
        }
        if (t == "?") {
          const auto n = text(q + 1);
          if (n == "extends" || n == "super" || n == ">" || n == ">>" || n == ">>>" || n == ",") {
            wildcards.push_back(q);
            continue;
          }
          break;
        }
        if (t == "@" && kind(q + 1) == TokenKind::Identifier) {
          continue;
        }
        break;
      }
      if (!ok) {
        for (const auto& pr : pairs) tree_.generic_closes[ti(pr.second)] = 0;
        continue;
      }
      for (const auto& [open, close] : pairs) {
        set_role(open, TokenRole::GenericOpen);
        set_role(close, TokenRole::GenericClose);
        generic_match_[open] = close;
      }
      for (auto w : wildcards) set_role(w, TokenRole::Wildcard);
      for (auto a : ands) set_role(a, TokenRole::TypeBoundAnd);
    }
  }

  // Unary/binary and related classification for operators the parser did
  // not already tag.
  void assign_operator_roles() {
    for (std::size_t p = 0; p < size(); ++p) {
      if (role(p) != TokenRole::None) continue;
      const auto t = text(p);
      const auto k = kind(p);
      if (t == "@") {
        set_role(p, TokenRole::AnnotationAt);
      } else if (t == "::") {
        set_role(p, TokenRole::MethodRef);
      } else if (k == TokenKind::Keyword && t == "instanceof") {
        set_role(p, TokenRole::BinaryOperator);
      } else if (k != TokenKind::Operator) {
        continue;
      } else if (t == "->") {
        set_role(p, TokenRole::Lambda);
      } else if (t == "?") {
        set_role(p, TokenRole::TernaryQuestion);
      } else if (t == ":") {
        set_role(p, TokenRole::TernaryColon);
      } else if (is_assignment_text(t)) {
        set_role(p, TokenRole::Assignment);
      } else if (t == "++" || t == "--" || t == "!" || t == "~") {
        set_role(p, TokenRole::UnaryOperator);
      } else if (t == "+" || t == "-") {
        set_role(p, is_unary_position(p) ? TokenRole::UnaryOperator : TokenRole::BinaryOperator);
      } else if (is_binary_operator_text(t)) {
        set_role(p, TokenRole::BinaryOperator);
      }
    }
  }

  bool is_unary_position(std::size_t p) const {
    if (p == 0) return true;
    const std::size_t q = p - 1;
    const auto prev = text(q);
    const auto k = kind(q);
    if (k == TokenKind::Identifier || k == TokenKind::IntLiteral || k == TokenKind::LongLiteral ||
        k == TokenKind::FloatLiteral || k == TokenKind::StringLiteral || k == TokenKind::CharLiteral) {
      return false;
    }
    if (k == TokenKind::Keyword) {
      return !(prev == "this" || prev == "super" || prev == "true" || prev == "false" || prev == "null" ||
               prev == "class");
    }
    if (prev == "]") return false;
    if (prev == ")") {
      // A primitive cast makes the following sign unary.
      const std::size_t open = match_[q];
      if (open == npos || open + 1 >= q) return false;
      for (std::size_t r = open + 1; r < q; ++r) {
        const auto w = text(r);
        if (!(is_primitive(w) || w == "[" || w == "]")) return false;
      }
      return true;
    }
    if (prev == "++" || prev == "--") return false;
    if (role(q) == TokenRole::GenericClose) return false;
    return true;
  }

  // --- bookkeeping ----------------------------------------------------------

  int new_block(BlockKind bk, BlockOwner owner, std::size_t keyword) {
    tree_.blocks.push_back(Block{bk, owner, ti(pos_), npos, current_block_, keyword});
    return static_cast<int>(tree_.blocks.size() - 1);
  }

  void close_block(int blk) {
    if (!eof() && at("}")) {
      tree_.blocks[static_cast<std::size_t>(blk)].close = ti(pos_);
      ++pos_;
    } else {
      tree_.unbalanced = true;
    }
  }

  int new_statement(StatementKind k, int parent) {
    Statement s;
    s.kind = k;
    s.first = ti(pos_);
    s.last = npos;
    s.parent = parent;
    tree_.statements.push_back(std::move(s));
    return static_cast<int>(tree_.statements.size() - 1);
  }

  Statement& stmt(int i) { return tree_.statements[static_cast<std::size_t>(i)]; }

  int new_control(ControlKind k, std::size_t kw) {
    Control c;
    c.kind = k;
    c.keyword = ti(kw);
    tree_.controls.push_back(c);
    return static_cast<int>(tree_.controls.size() - 1);
  }

  Control& control(int i) { return tree_.controls[static_cast<std::size_t>(i)]; }

  void add_member(MemberKind k, std::size_t first_pos, int statement = -1) {
    if (first_pos >= size() || pos_ == 0) return;
    tree_.members.push_back(Member{k, current_block_, ti(first_pos), last_consumed(), statement});
  }

  Declaration& add_decl(DeclKind k, std::size_t name_pos, std::size_t first_pos, std::vector<Modifier> mods) {
    Declaration d;
    d.kind = k;
    d.name = ti(name_pos);
    d.first = ti(first_pos);
    d.block = current_block_;
    for (const auto& m : mods) {
      if (m.annotation) continue;
      const auto w = toks_[m.token].text;
      if (w == "static") d.is_static = true;
      if (w == "final") d.is_final = true;
    }
    d.modifiers = std::move(mods);
    if (!type_stack_.empty()) {
      d.in_interface = type_stack_.back().first == TypeKeyword::Interface ||
                       type_stack_.back().first == TypeKeyword::Annotation;
      d.enclosing_type_name = type_stack_.back().second;
    }
    tree_.declarations.push_back(std::move(d));
    return tree_.declarations.back();
  }

  // --- compilation unit and members ---------------------------------------

  void parse_compilation_unit() {
    while (!eof()) {
      const std::size_t start = pos_;
      if (at(";")) {
        ++pos_;
        add_member(MemberKind::Empty, start);
        continue;
      }
      auto mods = parse_modifiers();
      if (at("package")) {
        parse_package(start);
      } else if (at("import") && mods.empty()) {
        parse_import();
      } else {
        pos_ = start;
        parse_member(TypeKeyword::None);
      }
      if (pos_ == start) ++pos_;
    }
  }

  void parse_package(std::size_t first) {
    mark_start(first);
    ++pos_;
    std::string name;
    while (!eof() && !at(";") && !at("{") && !at("}")) {
      name += text(pos_);
      ++pos_;
    }
    if (at(";")) ++pos_;
    tree_.package = PackageDecl{name, ti(first), last_consumed()};
    add_member(MemberKind::Package, first);
  }

  void parse_import() {
    const std::size_t first = pos_;
    mark_start(first);
    ++pos_;
    Import imp;
    imp.first = ti(first);
    imp.line = toks_[ti(first)].line;
    if (at("static")) {
      imp.is_static = true;
      ++pos_;
    }
    while (!eof() && !at(";") && !at("{") && !at("}") && !at("import")) {
      if (at("*")) {
        imp.star = true;
        set_role(pos_, TokenRole::ImportStar);
      } else if (!(at(".") && text(pos_ + 1) == "*")) {
        imp.path += text(pos_);
      }
      ++pos_;
    }
    if (at(";")) ++pos_;
    imp.last = last_consumed();
    tree_.imports.push_back(imp);
    add_member(imp.is_static ? MemberKind::StaticImport : MemberKind::Import, first);
  }

  std::vector<Modifier> parse_modifiers() {
    std::vector<Modifier> mods;
    while (!eof()) {
      if (at("@") && !at("interface", 1)) {
        const std::size_t s = pos_;
        set_role(pos_, TokenRole::AnnotationAt);
        ++pos_;
        while (ident() || (at(".") && kind(pos_ + 1) == TokenKind::Identifier)) ++pos_;
        if (at("(")) {
          ++pos_;
          skip_expression({")"});
          if (at(")")) ++pos_;
        }
        mods.push_back(Modifier{ti(s), last_consumed(), true});
        continue;
      }
      const auto t = text(pos_);
      if (kind(pos_) == TokenKind::Keyword && contains(kModifierWords, t)) {
        if (t == "synchronized" && at("(", 1)) break;
        if (t == "default" && (at(":", 1) || at("->", 1))) break;
        mods.push_back(Modifier{ti(pos_), ti(pos_), false});
        ++pos_;
        continue;
      }
      break;
    }
    return mods;
  }

  // Consumes a type if one starts at pos_. Returns false without consuming
  // otherwise.
  bool parse_type() {
    const std::size_t save = pos_;
    while (at("@") && !at("interface", 1)) {
      ++pos_;
      while (ident() || (at(".") && kind(pos_ + 1) == TokenKind::Identifier)) ++pos_;
      if (at("(")) skip_group();
    }
    if (is_primitive(text(pos_))) {
      ++pos_;
    } else if (ident()) {
      ++pos_;
      while (true) {
        if (at("<") && role(pos_) == TokenRole::GenericOpen && generic_match_[pos_] != npos) {
          pos_ = generic_match_[pos_] + 1;
        }
        if (at(".") && (kind(pos_ + 1) == TokenKind::Identifier || text(pos_ + 1) == "@")) {
          ++pos_;
          while (at("@")) {
            ++pos_;
            if (ident()) ++pos_;
          }
          if (ident()) ++pos_;
          continue;
        }
        break;
      }
    } else {
      pos_ = save;
      return false;
    }
    while (at("[") && at("]", 1)) pos_ += 2;
    return true;
  }

  void skip_dims() {
    while (at("[") && at("]", 1)) pos_ += 2;
  }

  // Skip to the next ';' (consumed), or past a balanced '{...}', or stop
  // before a '}' closing the container.
  void recover() {
    while (!eof()) {
      if (at(";")) {
        ++pos_;
        return;
      }
      if (at("}")) return;
      if (at("{")) {
        skip_group();
        return;
      }
      if (at("(") || at("[")) {
        skip_group();
        continue;
      }
      ++pos_;
    }
  }

  void parse_member(TypeKeyword container) {
    DepthGuard guard(depth_);
    const std::size_t first = pos_;
    mark_start(first);
    auto mods = parse_modifiers();
    for (const auto& m : mods) {
      if (m.annotation) tree_.starts_statement[m.token] = true;
    }
    mark_start(pos_);
    if (eof()) return;

    if (at("class") || at("interface") || at("enum") || (at("@") && at("interface", 1))) {
      parse_type_decl(first, std::move(mods));
      add_member(MemberKind::Type, first);
      return;
    }
    if (at("{")) {
      const bool is_static = std::any_of(mods.begin(), mods.end(), [&](const Modifier& m) {
        return !m.annotation && toks_[m.token].text == "static";
      });
      parse_code_block(is_static ? BlockOwner::StaticInit : BlockOwner::InstanceInit, BlockKind::MethodBody,
                       npos, -1);
      add_member(is_static ? MemberKind::StaticInit : MemberKind::InstanceInit, first);
      return;
    }
    if (at(";")) {
      ++pos_;
      add_member(MemberKind::Empty, first);
      return;
    }
    if (at("}")) return;

    if (at("<") && role(pos_) == TokenRole::GenericOpen && generic_match_[pos_] != npos) {
      pos_ = generic_match_[pos_] + 1;
    }
    (void)container;
    if (ident() && at("(", 1)) {
      const std::size_t name = pos_;
      add_decl(DeclKind::Constructor, name, first, std::move(mods));
      ++pos_;
      parse_params();
      skip_to_body();
      if (at("{")) {
        parse_code_block(BlockOwner::Constructor, BlockKind::MethodBody, ti(name), -1);
      } else if (at(";")) {
        ++pos_;
      }
      add_member(MemberKind::Constructor, first);
      return;
    }
    if (!parse_type() || !ident()) {
      recover();
      add_member(MemberKind::Empty, first);
      return;
    }
    if (at("(", 1)) {
      const std::size_t name = pos_;
      add_decl(DeclKind::Method, name, first, std::move(mods));
      ++pos_;
      parse_params();
      skip_dims();
      skip_to_body();
      if (at("{")) {
        parse_code_block(BlockOwner::Method, BlockKind::MethodBody, ti(name), -1);
      } else if (at(";")) {
        ++pos_;
      }
      add_member(MemberKind::Method, first);
      return;
    }
    const int s = parse_declarators(DeclKind::Field, StatementKind::FieldDecl, first, mods, -1, false);
    add_member(MemberKind::Field, first, s);
  }

  // Declarators after the type: name [dims] [= init] {, name ...} ;
  int parse_declarators(DeclKind dk, StatementKind sk, std::size_t first, const std::vector<Modifier>& mods,
                        int parent, bool in_for_init) {
    const std::size_t save = pos_;
    pos_ = first;
    const int s = new_statement(sk, parent);
    pos_ = save;
    stmt(s).in_for_init = in_for_init;
    int count = 0;
    while (!eof() && ident()) {
      Declaration& d = add_decl(dk, pos_, first, mods);
      d.statement = s;
      d.declarator = count++;
      ++pos_;
      skip_dims();
      if (at("=")) {
        ++pos_;
        skip_expression({",", ";"});
      }
      if (at(",")) {
        ++pos_;
        continue;
      }
      break;
    }
    stmt(s).declarators = count;
    if (!in_for_init) {
      if (at(";")) {
        ++pos_;
      } else if (!at("}")) {
        recover();
      }
    }
    stmt(s).last = last_consumed();
    stmt(s).block = current_block_;
    return s;
  }

  void skip_to_body() {
    while (!eof()) {
      if (at("{") || at(";") || at("}")) return;
      if (at("default")) {
        ++pos_;
        skip_expression({";"});
        continue;
      }
      if (at("(") || at("[")) {
        skip_group();
        continue;
      }
      ++pos_;
    }
  }

  void parse_params() {
    if (!at("(")) return;
    const std::size_t close = match_[pos_];
    ++pos_;
    while (!eof() && (close == npos || pos_ < close) && !at(")")) {
      const std::size_t s = pos_;
      auto mods = parse_modifiers();
      if (parse_type()) {
        if (at("...")) ++pos_;
        if (ident()) {
          add_decl(DeclKind::Parameter, pos_, s, std::move(mods));
          ++pos_;
          skip_dims();
        }
      }
      while (!eof() && (close == npos || pos_ < close) && !at(",") && !at(")")) {
        if (at("(") || at("[")) {
          skip_group();
        } else {
          ++pos_;
        }
      }
      if (at(",")) ++pos_;
      if (pos_ == s) ++pos_;
    }
    if (at(")")) ++pos_;
  }

  void parse_type_decl(std::size_t first, std::vector<Modifier> mods) {
    TypeKeyword tk = TypeKeyword::Class;
    if (at("@")) {
      ++pos_;
      tk = TypeKeyword::Annotation;
    } else if (at("interface")) {
      tk = TypeKeyword::Interface;
    } else if (at("enum")) {
      tk = TypeKeyword::Enum;
    }
    const std::size_t kw = pos_;
    ++pos_;
    std::size_t name = npos;
    if (ident()) {
      name = ti(pos_);
      Declaration& d = add_decl(DeclKind::Type, pos_, first, std::move(mods));
      d.type_keyword = tk;
      ++pos_;
    }
    while (!eof() && !at("{") && !at(";") && !at("}")) {
      if (at("(")) {
        skip_group();
      } else {
        ++pos_;
      }
    }
    if (at("{")) parse_class_body(BlockOwner::Type, ti(kw), tk, name);
  }

  void parse_class_body(BlockOwner owner, std::size_t keyword, TypeKeyword tk, std::size_t name) {
    DepthGuard guard(depth_);
    const int blk = new_block(BlockKind::ClassBody, owner, keyword);
    ++pos_;
    const int saved_block = current_block_;
    current_block_ = blk;
    type_stack_.emplace_back(tk, name);
    if (tk == TypeKeyword::Enum) parse_enum_constants();
    while (!eof() && !at("}")) {
      const std::size_t s = pos_;
      parse_member(tk);
      if (pos_ == s) ++pos_;
    }
    type_stack_.pop_back();
    current_block_ = saved_block;
    close_block(blk);
  }

  void parse_enum_constants() {
    const std::size_t first = pos_;
    bool any = false;
    while (!eof() && !at(";") && !at("}")) {
      const std::size_t s = pos_;
      mark_start(pos_);
      parse_modifiers();
      if (ident()) {
        ++pos_;
        any = true;
      }
      if (at("(")) {
        ++pos_;
        skip_expression({")"});
        if (at(")")) ++pos_;
      }
      if (at("{")) parse_class_body(BlockOwner::EnumConstant, npos, TypeKeyword::Class, npos);
      if (at(",")) {
        ++pos_;
      } else if (!at(";") && !at("}")) {
        if (pos_ == s) ++pos_;
        if (pos_ == s + 1 && !any) break;
      }
    }
    if (at(";")) {
      ++pos_;
      any = true;
    }
    if (any) add_member(MemberKind::EnumConstants, first);
  }

  // --- statements -----------------------------------------------------------

  // Parses '{ statements }' and returns the Block statement.
  int parse_code_block(BlockOwner owner, BlockKind bk, std::size_t keyword, int parent) {
    DepthGuard guard(depth_);
    mark_start(pos_);
    const int s = new_statement(StatementKind::Block, parent);
    const int blk = new_block(bk, owner, keyword);
    stmt(s).block = blk;
    ++pos_;
    const int saved_block = current_block_;
    current_block_ = blk;
    while (!eof() && !at("}")) {
      const std::size_t start = pos_;
      const int child = parse_statement(s, BlockOwner::Plain);
      if (child >= 0) stmt(s).children.push_back(child);
      if (pos_ == start) ++pos_;
    }
    current_block_ = saved_block;
    close_block(blk);
    stmt(s).last = last_consumed();
    return s;
  }

  void paren_expression() {
    if (!at("(")) return;
    ++pos_;
    skip_expression({")"});
    if (at(")")) ++pos_;
  }

  // Body of a control statement. Records bracing on the control.
  int parse_body(int parent, int ctl, BlockOwner owner) {
    if (eof()) return -1;
    const bool braced = at("{");
    const bool empty = at(";");
    const int child = parse_statement(parent, braced ? owner : BlockOwner::Plain);
    Control& c = control(ctl);
    c.braced = braced;
    c.empty_body = empty;
    if (child >= 0) {
      const Statement& b = stmt(child);
      c.body_first = b.first;
      c.body_last = b.last;
      if (braced) c.block = b.block;
      stmt(parent).children.push_back(child);
    }
    return child;
  }

  bool looks_like_local_var() {
    const std::size_t save = pos_;
    parse_modifiers();
    bool ok = false;
    if (parse_type() && ident()) {
      const auto n = text(pos_ + 1);
      ok = n == "=" || n == ";" || n == "," || n == "[" || n == ":";
    }
    pos_ = save;
    return ok;
  }

  int parse_statement(int parent, BlockOwner brace_owner) {
    DepthGuard guard(depth_);
    if (eof()) return -1;
    mark_start(pos_);
    const auto t = text(pos_);

    if (t == "{") {
      const BlockKind bk = brace_owner == BlockOwner::Plain ? BlockKind::Other : BlockKind::ControlBody;
      return parse_code_block(brace_owner, bk, npos, parent);
    }
    if (t == ";") {
      const int s = new_statement(StatementKind::Empty, parent);
      ++pos_;
      stmt(s).last = last_consumed();
      return s;
    }
    if (kind(pos_) == TokenKind::Keyword) {
      if (t == "if") return parse_if(parent);
      if (t == "for") return parse_for(parent);
      if (t == "while") return parse_while(parent);
      if (t == "do") return parse_do(parent);
      if (t == "try") return parse_try(parent);
      if (t == "switch") return parse_switch(parent);
      if (t == "synchronized" && at("(", 1)) return parse_synchronized(parent);
      if (t == "return" || t == "throw") {
        const int s = new_statement(t == "return" ? StatementKind::Return : StatementKind::Throw, parent);
        ++pos_;
        skip_expression({";"});
        return finish_simple(s);
      }
      if (t == "break" || t == "continue") {
        const int s = new_statement(t == "break" ? StatementKind::Break : StatementKind::Continue, parent);
        ++pos_;
        if (ident()) {
          stmt(s).label = ti(pos_);
          ++pos_;
        }
        return finish_simple(s);
      }
      if (t == "assert") {
        const int s = new_statement(StatementKind::Assert, parent);
        ++pos_;
        skip_expression({";", ":"});
        if (at(":")) {
          set_role(pos_, TokenRole::AssertColon);
          ++pos_;
          skip_expression({";"});
        }
        return finish_simple(s);
      }
      if ((t == "this" || t == "super") && at("(", 1)) {
        const int s = new_statement(StatementKind::ExplicitCtorCall, parent);
        skip_expression({";"});
        return finish_simple(s);
      }
      if (t == "else" || t == "catch" || t == "finally" || t == "case" || t == "default") {
        // Stray continuation keyword: consume it so parsing makes progress.
        const int s = new_statement(StatementKind::Expression, parent);
        ++pos_;
        stmt(s).last = last_consumed();
        return s;
      }
    }
    if (ident() && at(":", 1)) {
      const int s = new_statement(StatementKind::Labeled, parent);
      set_role(pos_ + 1, TokenRole::LabelColon);
      pos_ += 2;
      const int body = parse_statement(s, BlockOwner::Plain);
      if (body >= 0) stmt(s).children.push_back(body);
      stmt(s).last = last_consumed();
      return s;
    }
    {
      const std::size_t save = pos_;
      auto mods = parse_modifiers();
      if (at("class") || at("interface") || at("enum")) {
        pos_ = save;
        const int s = new_statement(StatementKind::LocalClass, parent);
        mods = parse_modifiers();
        parse_type_decl(save, std::move(mods));
        stmt(s).last = last_consumed();
        return s;
      }
      pos_ = save;
    }
    if (looks_like_local_var()) return parse_local_var(parent, false);

    const int s = new_statement(StatementKind::Expression, parent);
    skip_expression({";"});
    return finish_simple(s);
  }

  int finish_simple(int s) {
    if (at(";")) ++pos_;
    stmt(s).last = last_consumed();
    return s;
  }

  int parse_local_var(int parent, bool in_for_init) {
    const std::size_t first = pos_;
    auto mods = parse_modifiers();
    parse_type();
    return parse_declarators(DeclKind::LocalVariable, StatementKind::LocalVariable, first, mods, parent,
                             in_for_init);
  }

  void set_after(std::initializer_list<int> ctls) {
    for (int c : ctls) {
      if (c >= 0) control(c).after = eof() ? npos : ti(pos_);
    }
  }

  int parse_if(int parent) {
    const int s = new_statement(StatementKind::If, parent);
    const int ctl = new_control(ControlKind::If, pos_);
    ++pos_;
    paren_expression();
    parse_body(s, ctl, BlockOwner::If);
    int else_ctl = -1;
    if (at("else")) {
      mark_start(pos_);
      control(ctl).next_part = ti(pos_);
      else_ctl = new_control(ControlKind::Else, pos_);
      ++pos_;
      control(else_ctl).else_if = at("if");
      stmt(s).has_else = true;
      parse_body(s, else_ctl, BlockOwner::Else);
    }
    set_after({ctl, else_ctl});
    stmt(s).last = last_consumed();
    return s;
  }

  int parse_for(int parent) {
    const std::size_t kw = pos_;
    ++pos_;
    bool foreach = false;
    if (at("(") && match_[pos_] != npos) {
      const std::size_t close = match_[pos_];
      for (std::size_t q = pos_ + 1; q < close; ++q) {
        const auto w = text(q);
        if (w == ";") break;
        if (w == ":") {
          foreach = true;
          break;
        }
        if ((w == "(" || w == "[" || w == "{") && match_[q] != npos) q = match_[q];
      }
    }
    const int s = new_statement(foreach ? StatementKind::ForEach : StatementKind::For, parent);
    stmt(s).first = ti(kw);
    const int ctl = new_control(ControlKind::For, kw);
    if (at("(")) {
      ++pos_;
      if (foreach) {
        const std::size_t first = pos_;
        auto mods = parse_modifiers();
        parse_type();
        if (ident()) {
          add_decl(DeclKind::LocalVariable, pos_, first, std::move(mods));
          ++pos_;
        }
        while (!eof() && !at(":") && !at(")")) ++pos_;
        if (at(":")) {
          set_role(pos_, TokenRole::ForEachColon);
          ++pos_;
        }
        skip_expression({")"});
      } else {
        if (!at(";")) {
          if (looks_like_local_var()) {
            const int init = parse_local_var(s, true);
            stmt(s).children.push_back(init);
          } else {
            skip_expression({";"});
          }
        }
        if (at(";")) ++pos_;
        skip_expression({";"});
        if (at(";")) ++pos_;
        skip_expression({")"});
      }
      if (at(")")) ++pos_;
    }
    parse_body(s, ctl, BlockOwner::For);
    set_after({ctl});
    stmt(s).last = last_consumed();
    return s;
  }

  int parse_while(int parent) {
    const int s = new_statement(StatementKind::While, parent);
    const int ctl = new_control(ControlKind::While, pos_);
    ++pos_;
    paren_expression();
    parse_body(s, ctl, BlockOwner::While);
    set_after({ctl});
    stmt(s).last = last_consumed();
    return s;
  }

  int parse_do(int parent) {
    const int s = new_statement(StatementKind::Do, parent);
    const int ctl = new_control(ControlKind::DoWhile, pos_);
    ++pos_;
    parse_body(s, ctl, BlockOwner::Do);
    if (at("while")) {
      mark_start(pos_);
      control(ctl).next_part = ti(pos_);
      ++pos_;
      paren_expression();
    }
    if (at(";")) ++pos_;
    set_after({ctl});
    stmt(s).last = last_consumed();
    return s;
  }

  int parse_try(int parent) {
    const int s = new_statement(StatementKind::Try, parent);
    std::vector<int> ctls{new_control(ControlKind::Try, pos_)};
    ++pos_;
    if (at("(")) {
      ++pos_;
      while (!eof() && !at(")")) {
        const std::size_t r = pos_;
        skip_expression({";", ")"});
        if (at(";")) ++pos_;
        if (pos_ == r) break;
      }
      if (at(")")) ++pos_;
    }
    if (at("{")) parse_body(s, ctls.back(), BlockOwner::Try);
    while (at("catch") || at("finally")) {
      const bool is_catch = at("catch");
      mark_start(pos_);
      control(ctls.back()).next_part = ti(pos_);
      ctls.push_back(new_control(is_catch ? ControlKind::Catch : ControlKind::Finally, pos_));
      ++pos_;
      if (is_catch && at("(")) {
        const std::size_t close = match_[pos_];
        ++pos_;
        const std::size_t first = pos_;
        auto mods = parse_modifiers();
        parse_type();
        while (at("|")) {
          ++pos_;
          parse_type();
        }
        if (ident()) {
          add_decl(DeclKind::CatchParameter, pos_, first, std::move(mods));
          ++pos_;
        }
        if (close != npos) pos_ = std::max(pos_, close);
        if (at(")")) ++pos_;
      }
      if (!is_catch) stmt(s).has_finally = true;
      if (at("{")) parse_body(s, ctls.back(), is_catch ? BlockOwner::Catch : BlockOwner::Finally);
      if (!is_catch) break;
    }
    for (int c : ctls) set_after({c});
    stmt(s).last = last_consumed();
    return s;
  }

  int parse_synchronized(int parent) {
    const int s = new_statement(StatementKind::Synchronized, parent);
    const int ctl = new_control(ControlKind::Synchronized, pos_);
    ++pos_;
    paren_expression();
    if (at("{")) parse_body(s, ctl, BlockOwner::Synchronized);
    set_after({ctl});
    stmt(s).last = last_consumed();
    return s;
  }

  int parse_switch(int parent) {
    const int s = new_statement(StatementKind::Switch, parent);
    const int ctl = new_control(ControlKind::Switch, pos_);
    const int sw = static_cast<int>(tree_.switches.size());
    tree_.switches.push_back(Switch{ti(pos_), -1, {}, false});
    stmt(s).switch_index = sw;
    ++pos_;
    paren_expression();
    if (at("{")) {
      DepthGuard guard(depth_);
      const int blk = new_block(BlockKind::SwitchBody, BlockOwner::Switch, tree_.switches[sw].keyword);
      tree_.switches[static_cast<std::size_t>(sw)].block = blk;
      stmt(s).block = blk;
      control(ctl).braced = true;
      control(ctl).block = blk;
      ++pos_;
      const int saved_block = current_block_;
      current_block_ = blk;
      auto arms = [&]() -> std::vector<SwitchArm>& { return tree_.switches[static_cast<std::size_t>(sw)].arms; };
      auto close_arm = [&]() {
        if (!arms().empty() && arms().back().end == npos) arms().back().end = last_consumed();
      };
      while (!eof() && !at("}")) {
        const std::size_t start = pos_;
        const bool label = at("case") || (at("default") && (at(":", 1) || at("->", 1)));
        if (label) {
          const bool is_default = at("default");
          const bool extend = !arms().empty() && arms().back().statements.empty() && !arms().back().arrow;
          if (!extend) {
            close_arm();
            arms().push_back(SwitchArm{});
          }
          mark_start(pos_);
          arms().back().labels.push_back(ti(pos_));
          arms().back().end = npos;
          if (is_default) {
            arms().back().has_default = true;
            tree_.switches[static_cast<std::size_t>(sw)].has_default = true;
          }
          ++pos_;
          if (!is_default) skip_expression({":", "->"});
          if (at(":")) {
            set_role(pos_, TokenRole::CaseColon);
            ++pos_;
          } else if (at("->")) {
            arms().back().arrow = true;
            ++pos_;
            const int body = parse_statement(s, BlockOwner::Plain);
            if (body >= 0) arms().back().statements.push_back(body);
            close_arm();
          }
        } else {
          const int child = parse_statement(s, BlockOwner::Plain);
          if (child >= 0 && !arms().empty()) {
            arms().back().statements.push_back(child);
            arms().back().end = npos;
          }
        }
        if (pos_ == start) ++pos_;
      }
      close_arm();
      current_block_ = saved_block;
      close_block(blk);
    }
    set_after({ctl});
    stmt(s).last = last_consumed();
    return s;
  }

  // --- expressions ----------------------------------------------------------

  void skip_expression(std::initializer_list<std::string_view> terms) {
    DepthGuard guard(depth_);
    while (!eof()) {
      const auto t = text(pos_);
      if (std::find(terms.begin(), terms.end(), t) != terms.end()) return;
      if (kind(pos_) == TokenKind::Separator) {
        if (t == "(" || t == "[") {
          const std::string_view closer = t == "(" ? ")" : "]";
          ++pos_;
          if (closer == ")") {
            skip_expression({")"});
          } else {
            skip_expression({"]"});
          }
          if (at(closer)) ++pos_;
          continue;
        }
        if (t == ")" || t == "]" || t == "}" || t == ";") return;
        if (t == "{") {
          if (pos_ > 0 && text(pos_ - 1) == "->") {
            parse_code_block(BlockOwner::Lambda, BlockKind::MethodBody, ti(pos_ - 1), -1);
          } else {
            parse_array_init();
          }
          continue;
        }
      }
      if (kind(pos_) == TokenKind::Keyword && t == "new") {
        parse_creator();
        continue;
      }
      ++pos_;
    }
  }

  void parse_array_init() {
    DepthGuard guard(depth_);
    const int blk = new_block(BlockKind::Other, BlockOwner::ArrayInit, npos);
    set_role(pos_, TokenRole::ArrayInitBrace);
    ++pos_;
    const int saved_block = current_block_;
    current_block_ = blk;
    while (!eof() && !at("}")) {
      const std::size_t s = pos_;
      skip_expression({",", "}"});
      if (at(",")) ++pos_;
      if (pos_ == s) break;
    }
    current_block_ = saved_block;
    if (at("}")) set_role(pos_, TokenRole::ArrayInitBrace);
    close_block(blk);
  }

  void parse_creator() {
    const std::size_t kw = pos_;
    ++pos_;
    if (at("<") && role(pos_) == TokenRole::GenericOpen && generic_match_[pos_] != npos) {
      pos_ = generic_match_[pos_] + 1;
    }
    parse_modifiers();
    while (ident() || is_primitive(text(pos_))) {
      ++pos_;
      if (at("<") && role(pos_) == TokenRole::GenericOpen && generic_match_[pos_] != npos) {
        pos_ = generic_match_[pos_] + 1;
      }
      if (at(".") && (kind(pos_ + 1) == TokenKind::Identifier || text(pos_ + 1) == "@")) {
        ++pos_;
        parse_modifiers();
        continue;
      }
      break;
    }
    if (at("[")) {
      while (at("[")) {
        ++pos_;
        skip_expression({"]"});
        if (at("]")) ++pos_;
      }
      if (at("{")) parse_array_init();
      return;
    }
    if (at("(")) {
      ++pos_;
      skip_expression({")"});
      if (at(")")) ++pos_;
      if (at("{")) parse_class_body(BlockOwner::AnonymousClass, ti(kw), TypeKeyword::Class, npos);
    }
  }

  const std::vector<Token>& toks_;
  StructureTree tree_;
  std::vector<std::size_t> match_;
  std::vector<std::size_t> generic_match_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  int current_block_ = -1;
  std::vector<std::pair<TypeKeyword, std::size_t>> type_stack_;
};

}  // namespace

StructureTree parse_structure(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

}  // namespace stylemetric::java
