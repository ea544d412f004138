// Copyright 2026 The branchmeld Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "meld/ir_text.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "meld/validate.hpp"

namespace meld {

ParseError::ParseError(SourceSpan span, const std::string& message)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
                         message),
      span_(span),
      message_(message) {}

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok { Word, Local, GlobalName, Int, String, Punct, Arrow, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;     // word / name / string contents / punct char
  std::int64_t value = 0;  // Int (two's complement bits for large unsigned)
  bool negative = false;
  SourceSpan span;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.span = {line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (c == '%' || c == '@') {
        advance();
        std::string name = take_name();
        if (name.empty()) throw ParseError(t.span, std::string("expected a name after '") + c + "'");
        t.kind = c == '%' ? Tok::Local : Tok::GlobalName;
        t.text = std::move(name);
      } else if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        t.kind = Tok::Arrow;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_int(t);
      } else if (c == '\'') {
        lex_char(t);
      } else if (c == '"') {
        lex_string(t);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Word;
        t.text = take_name();
      } else if (std::string_view("(){}[],:=").find(c) != std::string_view::npos) {
        advance();
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
      } else {
        throw ParseError(t.span, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
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
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  std::string take_name() {
    std::string s;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) {
      s.push_back(text_[pos_]);
      advance();
    }
    return s;
  }
  void lex_int(Token& t) {
    t.kind = Tok::Int;
    if (peek() == '-') {
      t.negative = true;
      advance();
    }
    int base = 10;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      base = 16;
      advance();
      advance();
    }
    std::string digits;
    while (std::isxdigit(static_cast<unsigned char>(peek())) &&
           (base == 16 || std::isdigit(static_cast<unsigned char>(peek())))) {
      digits.push_back(peek());
      advance();
    }
    if (is_name_char(peek())) throw ParseError(t.span, "malformed integer literal");
    std::uint64_t mag = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), mag, base);
    if (ec != std::errc() || p != digits.data() + digits.size())
      throw ParseError(t.span, "integer literal out of range");
    if (t.negative && mag > (std::uint64_t{1} << 63))
      throw ParseError(t.span, "integer literal out of range");
    t.value = t.negative ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
    t.text = (t.negative ? "-" : "") + digits;
  }
  void lex_char(Token& t) {
    advance();  // opening quote
    char c = peek();
    if (c == '\\') {
      advance();
      char e = peek();
      switch (e) {
        case 'n': c = '\n'; break;
        case 't': c = '\t'; break;
        case 'r': c = '\r'; break;
        case '0': c = '\0'; break;
        case '\\': c = '\\'; break;
        case '\'': c = '\''; break;
        default: throw ParseError(t.span, "unknown escape in character literal");
      }
    } else if (c == '\'' || c == '\0' || c == '\n') {
      throw ParseError(t.span, "empty character literal");
    }
    advance();
    if (peek() != '\'') throw ParseError(t.span, "unterminated character literal");
    advance();
    t.kind = Tok::Int;
    t.value = static_cast<unsigned char>(c);
  }
  void lex_string(Token& t) {
    advance();
    while (peek() != '"') {
      if (peek() == '\0' || peek() == '\n') throw ParseError(t.span, "unterminated string");
      t.text.push_back(peek());
      advance();
    }
    advance();
    t.kind = Tok::String;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct RawOperand {
  enum class Kind { Local, Global, Int } kind = Kind::Int;
  std::string name;
  std::int64_t value = 0;
  bool negative = false;
  SourceSpan span;
};

struct RawInst {
  Instruction inst;  // operands filled during resolution
  std::vector<RawOperand> raw;
  std::vector<SourceSpan> label_spans;
  bool explicit_type = true;
  SourceSpan span;
};

struct RawBlock {
  std::string label;
  SourceSpan span;
  std::vector<RawInst> insts;
};

bool fits(Type t, const RawOperand& op) {
  if (t == Type::I1) return !op.negative && (op.value == 0 || op.value == 1);
  unsigned w = bit_width(t);
  if (w == 64) return true;
  if (op.negative) return op.value >= -(std::int64_t{1} << (w - 1));
  return static_cast<std::uint64_t>(op.value) <= (std::uint64_t{1} << w) - 1;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  IRModule run() {
    IRModule m;
    while (!at_end()) {
      const Token& t = cur();
      if (is_word("global")) {
        parse_global(m);
      } else if (is_word("safe_global")) {
        next();
        m.safe_global = expect(Tok::GlobalName, "global name").text;
      } else if (is_word("func")) {
        m.functions.push_back(parse_function());
      } else {
        throw ParseError(t.span, "expected 'func', 'global' or 'safe_global'");
      }
    }
    return m;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at_end() const { return cur().kind == Tok::End; }
  const Token& next() { return toks_[pos_++]; }
  bool is_word(std::string_view w) const { return cur().kind == Tok::Word && cur().text == w; }
  bool is_punct(char c) const { return cur().kind == Tok::Punct && cur().text[0] == c; }

  [[noreturn]] void fail(const std::string& what) const {
    std::string got;
    switch (cur().kind) {
      case Tok::End: got = "end of input"; break;
      case Tok::Local: got = "'%" + cur().text + "'"; break;
      case Tok::GlobalName: got = "'@" + cur().text + "'"; break;
      case Tok::Arrow: got = "'->'"; break;
      case Tok::String: got = "string"; break;
      default: got = "'" + cur().text + "'"; break;
    }
    throw ParseError(cur().span, "expected " + what + ", found " + got);
  }
  const Token& expect(Tok kind, const std::string& what) {
    if (cur().kind != kind) fail(what);
    return next();
  }
  void expect_punct(char c) {
    if (!is_punct(c)) fail(std::string("'") + c + "'");
    next();
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) fail("'" + std::string(w) + "'");
    next();
  }
  Type parse_type() {
    if (cur().kind == Tok::Word)
      if (auto t = parse_type_name(cur().text)) {
        next();
        return *t;
      }
    fail("a type");
  }
  bool at_type() const { return cur().kind == Tok::Word && parse_type_name(cur().text); }

  void parse_global(IRModule& m) {
    next();
    Global g;
    g.name = expect(Tok::GlobalName, "global name").text;
    expect_punct('[');
    const Token& size = expect(Tok::Int, "global size");
    if (size.negative || size.value <= 0) throw ParseError(size.span, "global size must be positive");
    expect_punct(']');
    g.init.assign(static_cast<std::size_t>(size.value), 0);
    if (is_word("zeroinit")) {
      next();
    } else {
      expect_punct('=');
      expect_punct('[');
      std::size_t i = 0;
      while (!is_punct(']')) {
        if (i > 0) expect_punct(',');
        const Token& b = expect(Tok::Int, "byte value");
        if (b.value < -128 || b.value > 255) throw ParseError(b.span, "byte value out of range");
        if (i >= g.init.size()) throw ParseError(b.span, "initializer longer than global");
        g.init[i++] = static_cast<std::uint8_t>(b.value);
      }
      next();
    }
    m.globals.push_back(std::move(g));
  }

  Function parse_function() {
    SourceSpan fn_span = cur().span;
    next();
    Function f;
    f.name = expect(Tok::GlobalName, "function name").text;
    expect_punct('(');
    while (!is_punct(')')) {
      if (!f.params.empty()) expect_punct(',');
      Param p;
      p.type = parse_type();
      p.name = expect(Tok::Local, "parameter name").text;
      f.params.push_back(std::move(p));
    }
    next();
    if (cur().kind != Tok::Arrow) fail("'->'");
    next();
    if (is_word("void")) {
      next();
    } else {
      f.return_type = parse_type();
    }
    if (is_word("source")) {
      next();
      f.source_file = expect(Tok::String, "source file name").text;
    }
    expect_punct('{');

    std::vector<RawBlock> blocks;
    while (!is_punct('}')) {
      if (cur().kind == Tok::Word && toks_[pos_ + 1].kind == Tok::Punct &&
          toks_[pos_ + 1].text == ":") {
        RawBlock b;
        b.span = cur().span;
        b.label = next().text;
        next();
        blocks.push_back(std::move(b));
        continue;
      }
      if (blocks.empty()) fail("a block label");
      blocks.back().insts.push_back(parse_instruction());
    }
    next();
    resolve(f, blocks, fn_span);
    return f;
  }

  RawOperand parse_operand() {
    RawOperand op;
    op.span = cur().span;
    switch (cur().kind) {
      case Tok::Local:
        op.kind = RawOperand::Kind::Local;
        op.name = next().text;
        return op;
      case Tok::GlobalName:
        op.kind = RawOperand::Kind::Global;
        op.name = next().text;
        return op;
      case Tok::Int:
        op.kind = RawOperand::Kind::Int;
        op.value = cur().value;
        op.negative = cur().negative;
        next();
        return op;
      case Tok::Word:
        if (cur().text == "true" || cur().text == "false") {
          op.value = cur().text == "true" ? 1 : 0;
          next();
          return op;
        }
        [[fallthrough]];
      default:
        fail("an operand");
    }
  }

  std::string parse_label_ref(RawInst& ri) {
    expect_word("label");
    ri.label_spans.push_back(cur().span);
    return expect(Tok::Local, "block label").text;
  }

  RawInst parse_instruction() {
    RawInst ri;
    ri.span = cur().span;
    Instruction& inst = ri.inst;
    inst.source_line = ri.span.line;

    if (cur().kind == Tok::Local) {
      inst.result = next().text;
      expect_punct('=');
    }
    if (cur().kind != Tok::Word) fail("an opcode");
    SourceSpan op_span = cur().span;
    std::string word = next().text;
    auto opcode = parse_opcode_name(word);
    if (!opcode || *opcode == Opcode::BrCond)
      throw ParseError(op_span, "unknown opcode '" + word + "'");
    inst.op = *opcode;

    auto comma = [&] { expect_punct(','); };
    switch (inst.op) {
      case Opcode::ICmp: {
        if (cur().kind != Tok::Word) fail("a comparison predicate");
        auto p = parse_predicate_name(cur().text);
        if (!p) throw ParseError(cur().span, "unknown predicate '" + cur().text + "'");
        next();
        inst.pred = *p;
        inst.type = parse_type();
        ri.raw.push_back(parse_operand());
        comma();
        ri.raw.push_back(parse_operand());
        break;
      }
      case Opcode::Select:
        if (at_type()) {
          inst.type = parse_type();
        } else {
          ri.explicit_type = false;
        }
        ri.raw.push_back(parse_operand());
        comma();
        ri.raw.push_back(parse_operand());
        comma();
        ri.raw.push_back(parse_operand());
        break;
      case Opcode::Load:
        inst.type = parse_type();
        comma();
        ri.raw.push_back(parse_operand());
        break;
      case Opcode::Store:
        inst.type = parse_type();
        ri.raw.push_back(parse_operand());
        comma();
        ri.raw.push_back(parse_operand());
        break;
      case Opcode::PtrAdd:
        inst.type = Type::Ptr;
        ri.raw.push_back(parse_operand());
        comma();
        ri.raw.push_back(parse_operand());
        break;
      case Opcode::Br:
        if (is_word("label")) {
          inst.labels.push_back(parse_label_ref(ri));
        } else {
          inst.op = Opcode::BrCond;
          ri.raw.push_back(parse_operand());
          comma();
          inst.labels.push_back(parse_label_ref(ri));
          comma();
          inst.labels.push_back(parse_label_ref(ri));
        }
        break;
      case Opcode::Phi:
        inst.type = parse_type();
        do {
          if (!ri.raw.empty()) comma();
          expect_punct('[');
          ri.raw.push_back(parse_operand());
          comma();
          ri.label_spans.push_back(cur().span);
          inst.labels.push_back(expect(Tok::Local, "incoming block label").text);
          expect_punct(']');
        } while (is_punct(','));
        break;
      case Opcode::Ret: {
        // `ret` takes an operand unless the next token starts another
        // instruction (`%r = ...`), a block label, or closes the function.
        bool next_is_def = toks_[pos_ + 1].kind == Tok::Punct && toks_[pos_ + 1].text == "=";
        if (cur().kind == Tok::Int || cur().kind == Tok::GlobalName || is_word("true") ||
            is_word("false") || (cur().kind == Tok::Local && !next_is_def))
          ri.raw.push_back(parse_operand());
        break;
      }
      default:  // binary arithmetic
        inst.type = parse_type();
        ri.raw.push_back(parse_operand());
        comma();
        ri.raw.push_back(parse_operand());
        break;
    }
    return ri;
  }

  // Second pass: give every register a type, then lower raw operands to
  // typed Values using the type their position demands.
  void resolve(Function& f, std::vector<RawBlock>& blocks, SourceSpan fn_span) {
    std::map<std::string, std::size_t, std::less<>> params;
    for (std::size_t i = 0; i < f.params.size(); ++i) params.emplace(f.params[i].name, i);

    std::set<std::string, std::less<>> labels;
    for (const auto& b : blocks)
      if (!labels.insert(b.label).second)
        throw ParseError(b.span, "duplicate block label '" + b.label + "'");

    std::map<std::string, Type, std::less<>> reg_types;
    std::vector<RawInst*> untyped;
    for (auto& b : blocks) {
      for (auto& ri : b.insts) {
        for (std::size_t k = 0; k < ri.inst.labels.size(); ++k)
          if (!labels.contains(ri.inst.labels[k]))
            throw ParseError(ri.label_spans[k], "unknown label '" + ri.inst.labels[k] + "'");
        if (!ri.inst.has_result()) continue;
        if (params.contains(ri.inst.result) || reg_types.contains(ri.inst.result))
          throw ParseError(ri.span, "redefinition of '%" + ri.inst.result + "'");
        if (ri.explicit_type) {
          reg_types.emplace(ri.inst.result, ri.inst.result_type());
        } else {
          untyped.push_back(&ri);
        }
      }
    }

    auto local_type = [&](const RawOperand& op) -> std::optional<Type> {
      if (op.kind == RawOperand::Kind::Global) return Type::Ptr;
      if (op.kind != RawOperand::Kind::Local) return std::nullopt;
      if (auto it = params.find(op.name); it != params.end()) return f.params[it->second].type;
      if (auto it = reg_types.find(op.name); it != reg_types.end()) return it->second;
      return std::nullopt;
    };
    // Untyped selects take the type of their first non-constant value operand.
    for (bool progress = true; progress && !untyped.empty();) {
      progress = false;
      for (auto it = untyped.begin(); it != untyped.end();) {
        RawInst& ri = **it;
        std::optional<Type> t = local_type(ri.raw[1]);
        if (!t) t = local_type(ri.raw[2]);
        if (t) {
          ri.inst.type = *t;
          reg_types.emplace(ri.inst.result, *t);
          it = untyped.erase(it);
          progress = true;
        } else {
          ++it;
        }
      }
    }
    for (RawInst* ri : untyped) {
      bool consts = ri->raw[1].kind == RawOperand::Kind::Int &&
                    ri->raw[2].kind == RawOperand::Kind::Int;
      throw ParseError(ri->span, consts ? "select of two constants needs an explicit type"
                                        : "cannot infer the type of select");
    }

    auto lower = [&](const RawOperand& op, Type want) -> Value {
      switch (op.kind) {
        case RawOperand::Kind::Int:
          if (!fits(want, op))
            throw ParseError(op.span, "constant " + std::to_string(op.value) + " does not fit " +
                                          std::string(type_name(want)));
          return Value::constant(want, op.value);
        case RawOperand::Kind::Global:
          if (want != Type::Ptr)
            throw ParseError(op.span, "type mismatch: global '@" + op.name + "' is ptr, expected " +
                                          std::string(type_name(want)));
          return Value::global(op.name);
        case RawOperand::Kind::Local: {
          Value v;
          if (auto it = params.find(op.name); it != params.end()) {
            v = Value::arg(static_cast<std::uint32_t>(it->second), f.params[it->second].type);
          } else if (auto rt = reg_types.find(op.name); rt != reg_types.end()) {
            v = Value::reg(op.name, rt->second);
          } else {
            throw ParseError(op.span, "use of undefined value '%" + op.name + "'");
          }
          if (v.type != want && want != kAnyInteger)
            throw ParseError(op.span, "type mismatch: '%" + op.name + "' is " +
                                          std::string(type_name(v.type)) + ", expected " +
                                          std::string(type_name(want)));
          if (want == kAnyInteger && !is_integer(v.type))
            throw ParseError(op.span, "type mismatch: '%" + op.name + "' must be an integer");
          return v;
        }
      }
      return {};
    };

    for (auto& rb : blocks) {
      BasicBlock bb;
      bb.label = rb.label;
      for (auto& ri : rb.insts) {
        Instruction& inst = ri.inst;
        const Type t = inst.type;
        std::vector<Type> want;
        switch (inst.op) {
          case Opcode::ICmp: want = {t, t}; break;
          case Opcode::Select: want = {Type::I1, t, t}; break;
          case Opcode::Load: want = {Type::Ptr}; break;
          case Opcode::Store: want = {t, Type::Ptr}; break;
          case Opcode::PtrAdd: want = {Type::Ptr, kAnyInteger}; break;
          case Opcode::BrCond: want = {Type::I1}; break;
          case Opcode::Br: break;
          case Opcode::Phi: want.assign(ri.raw.size(), t); break;
          case Opcode::Ret:
            if (!ri.raw.empty()) {
              if (!f.return_type) throw ParseError(ri.span, "ret with a value in a void function");
              want = {*f.return_type};
            } else if (f.return_type) {
              throw ParseError(ri.span, "ret without a value in a non-void function");
            }
            break;
          default: want = {t, t}; break;
        }
        for (std::size_t k = 0; k < ri.raw.size(); ++k) {
          Type w = want[k];
          if (w == kAnyInteger && ri.raw[k].kind == RawOperand::Kind::Int) w = Type::I64;
          inst.operands.push_back(lower(ri.raw[k], w));
        }
        bb.instructions.push_back(std::move(inst));
      }
      f.blocks.push_back(std::move(bb));
    }
    (void)fn_span;
  }

  // Placeholder "type" for ptradd offsets, which accept any integer width.
  static constexpr Type kAnyInteger = static_cast<Type>(0xff);

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

void print_value(std::ostream& os, const Function& f, const Value& v) {
  switch (v.kind) {
    case Value::Kind::Const:
      if (v.type == Type::I1 || v.type == Type::Ptr) {
        os << v.payload;
      } else {
        os << v.signed_payload();
      }
      break;
    case Value::Kind::Reg: os << '%' << v.name; break;
    case Value::Kind::Global: os << '@' << v.name; break;
    case Value::Kind::Arg:
      if (v.index < f.params.size()) {
        os << '%' << f.params[v.index].name;
      } else {
        os << "%<arg" << v.index << '>';
      }
      break;
  }
}

void print_inst(std::ostream& os, const Function& f, const Instruction& inst) {
  auto val = [&](std::size_t k) { print_value(os, f, inst.operands.at(k)); };
  if (inst.has_result()) os << '%' << inst.result << " = ";
  switch (inst.op) {
    case Opcode::ICmp:
      os << "icmp " << predicate_name(inst.pred) << ' ' << type_name(inst.type) << ' ';
      val(0);
      os << ", ";
      val(1);
      break;
    case Opcode::Select:
      os << "select ";
      if (inst.operands.size() == 3 && inst.operands[1].is_const() && inst.operands[2].is_const())
        os << type_name(inst.type) << ' ';
      val(0);
      os << ", ";
      val(1);
      os << ", ";
      val(2);
      break;
    case Opcode::Load:
      os << "load " << type_name(inst.type) << ", ";
      val(0);
      break;
    case Opcode::Store:
      os << "store " << type_name(inst.type) << ' ';
      val(0);
      os << ", ";
      val(1);
      break;
    case Opcode::PtrAdd:
      os << "ptradd ";
      val(0);
      os << ", ";
      val(1);
      break;
    case Opcode::BrCond:
      os << "br ";
      val(0);
      os << ", label %" << inst.labels.at(0) << ", label %" << inst.labels.at(1);
      break;
    case Opcode::Br: os << "br label %" << inst.labels.at(0); break;
    case Opcode::Phi:
      os << "phi " << type_name(inst.type) << ' ';
      for (std::size_t k = 0; k < inst.operands.size(); ++k) {
        if (k) os << ", ";
        os << '[';
        val(k);
        os << ", %" << inst.labels.at(k) << ']';
      }
      break;
    case Opcode::Ret:
      os << "ret";
      if (!inst.operands.empty()) {
        os << ' ';
        val(0);
      }
      break;
    default:
      os << opcode_name(inst.op) << ' ' << type_name(inst.type) << ' ';
      val(0);
      os << ", ";
      val(1);
      break;
  }
}

void print_func(std::ostream& os, const Function& f) {
  os << "func @" << f.name << '(';
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    if (i) os << ", ";
    os << type_name(f.params[i].type) << " %" << f.params[i].name;
  }
  os << ") -> " << (f.return_type ? type_name(*f.return_type) : "void");
  if (f.source_file) os << " source \"" << *f.source_file << '"';
  os << " {\n";
  for (const auto& b : f.blocks) {
    os << b.label << ":\n";
    for (const auto& inst : b.instructions) {
      os << "  ";
      print_inst(os, f, inst);
      os << '\n';
    }
  }
  os << "}\n";
}

}  // namespace

IRModule parse_module(std::string_view text) {
  IRModule m = Parser(Lexer(text).run()).run();
  auto violations = validate_module(m);
  if (!violations.empty()) {
    // Point at the first instruction of the offending function when possible.
    SourceSpan span;
    for (const auto& f : m.functions)
      if (violations.front().find("@" + f.name + ":") != std::string::npos && !f.blocks.empty() &&
          !f.blocks.front().instructions.empty() && f.blocks.front().instructions.front().source_line)
        span.line = *f.blocks.front().instructions.front().source_line;
    throw ParseError(span, "invalid module: " + violations.front());
  }
  return m;
}

std::string print_function(const Function& function) {
  std::ostringstream os;
  print_func(os, function);
  return os.str();
}

std::string print_instruction(const Function& function, const Instruction& inst) {
  std::ostringstream os;
  print_inst(os, function, inst);
  return os.str();
}

std::string print_module(const IRModule& module) {
  std::ostringstream os;
  os << "; branchmeld module\n";
  for (const auto& g : module.globals) {
    os << "global @" << g.name << '[' << g.size() << "] ";
    std::size_t used = g.init.size();
    while (used > 0 && g.init[used - 1] == 0) --used;
    if (used == 0) {
      os << "zeroinit\n";
      continue;
    }
    os << "= [";
    for (std::size_t i = 0; i < used; ++i) os << (i ? ", " : "") << static_cast<int>(g.init[i]);
    os << "]\n";
  }
  if (module.safe_global) os << "safe_global @" << *module.safe_global << '\n';
  for (const auto& f : module.functions) {
    os << '\n';
    print_func(os, f);
  }
  return os.str();
}

}  // namespace meld
