#include "qbv/parser.hpp"

#include <cctype>
#include <unordered_map>

namespace qbv {

namespace {

struct Token {
  enum class Kind { LParen, RParen, Symbol, Keyword, Numeral, BvLit, String, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  const Token& peek() {
    if (!has_) {
      cur_ = next_token();
      has_ = true;
    }
    return cur_;
  }

  Token take() {
    const Token& t = peek();
    has_ = false;
    return t;
  }

 private:
  Token next_token() {
    for (;;) {
      if (pos_ >= text_.size()) return Token{Token::Kind::End, "", line_, col_};
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      break;
    }
    Token t;
    t.line = line_;
    t.col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      t.kind = Token::Kind::LParen;
      t.text = "(";
      return t;
    }
    if (c == ')') {
      advance();
      t.kind = Token::Kind::RParen;
      t.text = ")";
      return t;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (pos_ < text_.size()) {
        if (text_[pos_] == '"') {
          advance();
          if (pos_ < text_.size() && text_[pos_] == '"') {
            s.push_back('"');
            advance();
            continue;
          }
          t.kind = Token::Kind::String;
          t.text = s;
          return t;
        }
        s.push_back(text_[pos_]);
        advance();
      }
      throw ParseError("unterminated string literal", t.line, t.col);
    }
    if (c == '#') {
      std::string s;
      while (pos_ < text_.size() && !is_delim(text_[pos_])) {
        s.push_back(text_[pos_]);
        advance();
      }
      t.kind = Token::Kind::BvLit;
      t.text = s;
      return t;
    }
    if (c == '|') {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '|') {
        s.push_back(text_[pos_]);
        advance();
      }
      if (pos_ >= text_.size())
        throw ParseError("unterminated quoted symbol", t.line, t.col);
      advance();
      t.kind = Token::Kind::Symbol;
      t.text = s;
      return t;
    }
    std::string s;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) {
      s.push_back(text_[pos_]);
      advance();
    }
    if (s.empty())
      throw ParseError("unexpected character", t.line, t.col);
    if (s[0] == ':')
      t.kind = Token::Kind::Keyword;
    else if (std::isdigit(static_cast<unsigned char>(s[0])))
      t.kind = Token::Kind::Numeral;
    else
      t.kind = Token::Kind::Symbol;
    t.text = s;
    return t;
  }

  static bool is_delim(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
           c == ')' || c == ';' || c == '"';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
  bool has_ = false;
};

class Parser {
 public:
  Parser(TermStore& store, std::string_view text) : store_(store), lex_(text) {}

  Script run() {
    Script script;
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Kind::End) break;
      expect(Token::Kind::LParen);
      Token cmd = lex_.take();
      if (cmd.kind != Token::Kind::Symbol)
        throw ParseError("expected a command name", cmd.line, cmd.col);
      if (cmd.text == "set-logic") {
        Token logic = lex_.take();
        if (logic.kind != Token::Kind::Symbol)
          throw ParseError("expected a logic name", logic.line, logic.col);
        if (logic.text != "BV" && logic.text != "QF_BV")
          throw ParseError("unsupported logic '" + logic.text +
                               "', expected BV or QF_BV",
                           logic.line, logic.col);
        if (!script.logic.empty())
          throw ParseError("duplicate set-logic", logic.line, logic.col);
        script.logic = logic.text;
        expect(Token::Kind::RParen);
      } else if (cmd.text == "set-info" || cmd.text == "set-option") {
        skip_rest();
      } else if (cmd.text == "declare-const") {
        declare(script, /*fun_syntax=*/false, cmd);
      } else if (cmd.text == "declare-fun") {
        declare(script, /*fun_syntax=*/true, cmd);
      } else if (cmd.text == "assert") {
        script.assertions.push_back(parse_term({}));
        expect(Token::Kind::RParen);
      } else if (cmd.text == "check-sat") {
        script.check_sat = true;
        expect(Token::Kind::RParen);
      } else if (cmd.text == "get-model") {
        script.get_model = true;
        expect(Token::Kind::RParen);
      } else if (cmd.text == "exit") {
        expect(Token::Kind::RParen);
        break;
      } else {
        throw ParseError("unsupported command '" + cmd.text + "'", cmd.line,
                         cmd.col);
      }
    }
    return script;
  }

 private:
  using Env = std::unordered_map<std::string, Term>;

  void expect(Token::Kind kind) {
    Token t = lex_.take();
    if (t.kind != kind)
      throw ParseError(std::string("expected '") +
                           (kind == Token::Kind::LParen ? "(" : ")") + "'",
                       t.line, t.col);
  }

  void skip_rest() {
    int depth = 1;
    while (depth > 0) {
      Token t = lex_.take();
      if (t.kind == Token::Kind::End)
        throw ParseError("unexpected end of input", t.line, t.col);
      if (t.kind == Token::Kind::LParen) ++depth;
      if (t.kind == Token::Kind::RParen) --depth;
    }
  }

  void declare(Script& script, bool fun_syntax, const Token& cmd) {
    Token name = lex_.take();
    if (name.kind != Token::Kind::Symbol)
      throw ParseError("expected a symbol", name.line, name.col);
    if (globals_.count(name.text))
      throw ParseError("symbol '" + name.text + "' already declared",
                       name.line, name.col);
    if (fun_syntax) {
      expect(Token::Kind::LParen);
      Token t = lex_.take();
      if (t.kind != Token::Kind::RParen)
        throw ParseError(
            "uninterpreted functions are unsupported; only zero-ary "
            "declarations are accepted",
            cmd.line, cmd.col);
    }
    Sort sort = parse_sort();
    expect(Token::Kind::RParen);
    VarId v = store_.mk_var(name.text, sort);
    globals_.emplace(name.text, store_.var(v));
    script.consts.push_back(v);
  }

  Sort parse_sort() {
    Token t = lex_.take();
    if (t.kind == Token::Kind::Symbol && t.text == "Bool")
      return Sort::boolean();
    if (t.kind == Token::Kind::LParen) {
      Token underscore = lex_.take();
      Token bv = lex_.take();
      Token width = lex_.take();
      if (underscore.text != "_" || bv.text != "BitVec" ||
          width.kind != Token::Kind::Numeral)
        throw ParseError("expected (_ BitVec n)", t.line, t.col);
      expect(Token::Kind::RParen);
      unsigned long w = std::stoul(width.text);
      if (w < 1 || w > kMaxWidth)
        throw ParseError("unsupported bit-vector width " + width.text +
                             " (supported range 1.." +
                             std::to_string(kMaxWidth) + ")",
                         width.line, width.col);
      return Sort::bv(static_cast<uint32_t>(w));
    }
    throw ParseError("expected a sort", t.line, t.col);
  }

  Term lookup(const Token& name, const Env& env) {
    auto it = env.find(name.text);
    if (it != env.end()) return it->second;
    auto git = globals_.find(name.text);
    if (git != globals_.end()) return git->second;
    throw ParseError("unknown symbol '" + name.text + "'", name.line,
                     name.col);
  }

  Term parse_bv_literal(const Token& t) {
    const std::string& s = t.text;
    if (s.size() > 2 && s[1] == 'b') {
      uint32_t w = static_cast<uint32_t>(s.size() - 2);
      if (w > kMaxWidth)
        throw ParseError("unsupported bit-vector width", t.line, t.col);
      uint64_t v = 0;
      for (size_t i = 2; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
          throw ParseError("bad binary literal", t.line, t.col);
        v = (v << 1) | static_cast<uint64_t>(s[i] - '0');
      }
      return store_.num(v, w);
    }
    if (s.size() > 2 && s[1] == 'x') {
      uint32_t w = static_cast<uint32_t>(4 * (s.size() - 2));
      if (w > kMaxWidth)
        throw ParseError("unsupported bit-vector width", t.line, t.col);
      uint64_t v = 0;
      for (size_t i = 2; i < s.size(); ++i) {
        char c = static_cast<char>(std::tolower(s[i]));
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else throw ParseError("bad hexadecimal literal", t.line, t.col);
        v = (v << 4) | static_cast<uint64_t>(d);
      }
      return store_.num(v, w);
    }
    throw ParseError("bad bit-vector literal", t.line, t.col);
  }

  std::vector<Term> parse_args(const Env& env, const Token& where, size_t min_arity) {
    std::vector<Term> args;
    while (lex_.peek().kind != Token::Kind::RParen) {
      if (lex_.peek().kind == Token::Kind::End)
        throw ParseError("unexpected end of input", where.line, where.col);
      args.push_back(parse_term(env));
    }
    lex_.take();  // ')'
    if (args.size() < min_arity)
      throw ParseError("operator '" + where.text + "' needs at least " +
                           std::to_string(min_arity) + " arguments",
                       where.line, where.col);
    return args;
  }

  Term apply_nary_bv(BvOp op, const std::vector<Term>& args) {
    Term acc = args[0];
    for (size_t i = 1; i < args.size(); ++i) acc = store_.bvop(op, acc, args[i]);
    return acc;
  }

  Term parse_term(const Env& env) {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::Symbol:
        if (t.text == "true") return store_.tru();
        if (t.text == "false") return store_.fls();
        return lookup(t, env);
      case Token::Kind::BvLit:
        return parse_bv_literal(t);
      case Token::Kind::Numeral:
        throw ParseError(
            "bare numerals are not terms; use #b/#x or (_ bvN w)", t.line,
            t.col);
      case Token::Kind::LParen:
        return parse_application(env, t);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
    }
  }

  Term parse_application(const Env& env, const Token& open) {
    Token head = lex_.take();
    if (head.kind == Token::Kind::LParen) {
      // ((_ extract h l) arg)
      Token underscore = lex_.take();
      Token what = lex_.take();
      if (underscore.text != "_" || what.text != "extract")
        throw ParseError("unsupported indexed operator", what.line, what.col);
      Token hi = lex_.take();
      Token lo = lex_.take();
      if (hi.kind != Token::Kind::Numeral || lo.kind != Token::Kind::Numeral)
        throw ParseError("extract needs numeral indices", hi.line, hi.col);
      expect(Token::Kind::RParen);
      Term arg = parse_term(env);
      expect(Token::Kind::RParen);
      try {
        return store_.extract(arg, static_cast<uint32_t>(std::stoul(hi.text)),
                              static_cast<uint32_t>(std::stoul(lo.text)));
      } catch (const SortError& e) {
        throw ParseError(e.what(), open.line, open.col);
      }
    }
    if (head.kind != Token::Kind::Symbol)
      throw ParseError("expected an operator", head.line, head.col);
    const std::string& op = head.text;

    try {
      if (op == "_") {
        // (_ bvN w)
        Token name = lex_.take();
        Token width = lex_.take();
        if (name.text.rfind("bv", 0) != 0 ||
            width.kind != Token::Kind::Numeral)
          throw ParseError("unsupported indexed term", name.line, name.col);
        expect(Token::Kind::RParen);
        uint64_t value = std::stoull(name.text.substr(2));
        unsigned long w = std::stoul(width.text);
        if (w < 1 || w > kMaxWidth)
          throw ParseError("unsupported bit-vector width " + width.text,
                           width.line, width.col);
        return store_.num(value, static_cast<uint32_t>(w));
      }
      if (op == "let") return parse_let(env, head);
      if (op == "forall" || op == "exists") return parse_quant(env, head);

      if (op == "not") {
        auto args = parse_args(env, head, 1);
        if (args.size() != 1)
          throw ParseError("not takes one argument", head.line, head.col);
        return store_.mk_not(args[0]);
      }
      if (op == "and") return store_.mk_and(parse_args(env, head, 1));
      if (op == "or") return store_.mk_or(parse_args(env, head, 1));
      if (op == "=>") {
        auto args = parse_args(env, head, 2);
        Term acc = args.back();
        for (size_t i = args.size() - 1; i-- > 0;)
          acc = store_.implies(args[i], acc);
        return acc;
      }
      if (op == "ite") {
        auto args = parse_args(env, head, 3);
        if (args.size() != 3)
          throw ParseError("ite takes three arguments", head.line, head.col);
        return store_.ite(args[0], args[1], args[2]);
      }
      if (op == "=" || op == "distinct") {
        auto args = parse_args(env, head, 2);
        if (args.size() != 2)
          throw ParseError("'" + op + "' is supported with exactly two arguments",
                           head.line, head.col);
        bool eq = op == "=";
        if (args[0]->sort.is_bool()) {
          if (!args[1]->sort.is_bool())
            throw ParseError("sort mismatch", head.line, head.col);
          Term iff = store_.iff(args[0], args[1]);
          return eq ? iff : store_.mk_not(iff);
        }
        return store_.rel(eq ? Rel::Eq : Rel::Ne, args[0], args[1]);
      }

      static const std::unordered_map<std::string, Rel> rels = {
          {"bvult", Rel::Ult}, {"bvugt", Rel::Ugt}, {"bvule", Rel::Ule},
          {"bvuge", Rel::Uge}, {"bvslt", Rel::Slt}, {"bvsgt", Rel::Sgt},
          {"bvsle", Rel::Sle}, {"bvsge", Rel::Sge}};
      auto rit = rels.find(op);
      if (rit != rels.end()) {
        auto args = parse_args(env, head, 2);
        if (args.size() != 2)
          throw ParseError("'" + op + "' takes two arguments", head.line,
                           head.col);
        return store_.rel(rit->second, args[0], args[1]);
      }

      if (op == "bvnot" || op == "bvneg") {
        auto args = parse_args(env, head, 1);
        if (args.size() != 1)
          throw ParseError("'" + op + "' takes one argument", head.line,
                           head.col);
        return store_.bvop(op == "bvnot" ? BvOp::Not : BvOp::Neg, args[0]);
      }
      static const std::unordered_map<std::string, BvOp> nary = {
          {"bvand", BvOp::And}, {"bvor", BvOp::Or},   {"bvadd", BvOp::Add},
          {"bvmul", BvOp::Mul}, {"concat", BvOp::Concat}};
      auto nit = nary.find(op);
      if (nit != nary.end())
        return apply_nary_bv(nit->second, parse_args(env, head, 2));
      static const std::unordered_map<std::string, BvOp> binary = {
          {"bvudiv", BvOp::Udiv}, {"bvurem", BvOp::Urem},
          {"bvshl", BvOp::Shl},   {"bvlshr", BvOp::Lshr},
          {"bvashr", BvOp::Ashr}};
      auto bit = binary.find(op);
      if (bit != binary.end()) {
        auto args = parse_args(env, head, 2);
        if (args.size() != 2)
          throw ParseError("'" + op + "' takes two arguments", head.line,
                           head.col);
        return store_.bvop(bit->second, args[0], args[1]);
      }
      if (op == "bvsub") {
        auto args = parse_args(env, head, 2);
        if (args.size() != 2)
          throw ParseError("bvsub takes two arguments", head.line, head.col);
        return store_.sub(args[0], args[1]);
      }
    } catch (const SortError& e) {
      throw ParseError(e.what(), head.line, head.col);
    }
    throw ParseError("unsupported operator '" + op + "'", head.line, head.col);
  }

  Term parse_let(const Env& env, const Token& head) {
    expect(Token::Kind::LParen);
    Env extended = env;
    std::vector<std::pair<std::string, Term>> bindings;
    while (lex_.peek().kind != Token::Kind::RParen) {
      expect(Token::Kind::LParen);
      Token name = lex_.take();
      if (name.kind != Token::Kind::Symbol)
        throw ParseError("expected a let binding name", name.line, name.col);
      Term value = parse_term(env);  // parallel let: old scope
      expect(Token::Kind::RParen);
      bindings.emplace_back(name.text, value);
    }
    lex_.take();  // ')'
    for (auto& [name, value] : bindings) extended[name] = value;
    Term body = parse_term(extended);
    expect(Token::Kind::RParen);
    (void)head;
    return body;
  }

  Term parse_quant(const Env& env, const Token& head) {
    expect(Token::Kind::LParen);
    Env extended = env;
    std::vector<VarId> binders;
    while (lex_.peek().kind != Token::Kind::RParen) {
      expect(Token::Kind::LParen);
      Token name = lex_.take();
      if (name.kind != Token::Kind::Symbol)
        throw ParseError("expected a bound variable name", name.line,
                         name.col);
      Sort sort = parse_sort();
      if (!sort.is_bv())
        throw ParseError("only bit-vector sorted binders are supported",
                         name.line, name.col);
      expect(Token::Kind::RParen);
      VarId v = store_.mk_var(name.text, sort);
      binders.push_back(v);
      extended[name.text] = store_.var(v);
    }
    lex_.take();  // ')'
    if (binders.empty())
      throw ParseError("empty binder list", head.line, head.col);
    Term body = parse_term(extended);
    expect(Token::Kind::RParen);
    try {
      return head.text == "forall" ? store_.forall(std::move(binders), body)
                                   : store_.exists(std::move(binders), body);
    } catch (const SortError& e) {
      throw ParseError(e.what(), head.line, head.col);
    }
  }

  TermStore& store_;
  Lexer lex_;
  Env globals_;
};

}  // namespace

Script parse_script(TermStore& store, std::string_view text) {
  Parser parser(store, text);
  return parser.run();
}

}  // namespace qbv
