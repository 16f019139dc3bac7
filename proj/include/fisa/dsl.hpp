#pragma once

// Parsers and canonical serializers for the three input languages:
//   *.fis  system models
//   *.cat  guideline catalogs
//   *.ovl  refinement overlays
//
// Model grammar:
//   model     := usecase? (component | function | flow)*
//   usecase   := "usecase" STRING "{" ("operation" ":" OPVAL)? ("location" ":" LOCVAL)?
//                ("connection" ":" CONNVAL)? "}"
//   component := "component" ID STRING? "kind" "=" KIND     KIND := builtin | "custom" ":" STRING
//   function  := "function" ID STRING "in" ID "class" "=" CLASS
//   flow      := "flow" ID ":" endpoint "->" endpoint ("via" ID)? ("payload" STRING)?
//   endpoint  := ID | "EXTERNAL"
//
// Catalog grammar:
//   loss   := "loss" ID STRING
//   hazard := "hazard" ID STRING "losses" "=" list
//   ifb    := "ifb" ID "class" "=" CLASS "instructor" "=" MAJOR ":" MINOR "hazards" "=" list "text" "=" STRING
//   ls     := "ls" ID "parent" "=" ID "category" "=" CATEGORY "text" "=" STRING
//   list   := "[" (ID ("," ID)*)? "]"
//
// Overlay grammar:
//   refine  := "refine" ID "{" variant* "}"
//   variant := "ifb" INT STRING ("hazards" "=" list)? ("{" lsvar* "}")?
//   lsvar   := "ls" ID "." INT STRING ("prevent" "=" STRING)? ("react" "=" STRING)?

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fisa/catalog.hpp"
#include "fisa/diagnostic.hpp"
#include "fisa/lexer.hpp"
#include "fisa/model.hpp"

namespace fisa {

struct LsVariant {
  std::string ls_template;
  int index = 1;
  std::string description;
  std::optional<std::string> prevent_text;  // overrides the generated inversion constraint
  std::optional<std::string> react_text;    // overrides the generated reaction constraint

  friend bool operator==(const LsVariant&, const LsVariant&) = default;
};

struct IfbVariant {
  int index = 1;
  std::string description;
  std::optional<std::vector<std::string>> hazards;  // absent: inherit the template's hazards
  std::vector<LsVariant> ls_variants;

  friend bool operator==(const IfbVariant&, const IfbVariant&) = default;
};

struct Refinement {
  std::string target;  // generic IFB instance id, e.g. F-1_IFB-2
  std::vector<IfbVariant> variants;
  std::optional<SourcePosition> position;

  friend bool operator==(const Refinement& a, const Refinement& b) {
    return a.target == b.target && a.variants == b.variants;
  }
};

struct Overlay {
  std::vector<Refinement> refinements;

  friend bool operator==(const Overlay&, const Overlay&) = default;
};

namespace dsl {

namespace detail {

struct SyntaxAbort {};

class ParserBase {
 public:
  ParserBase(std::string_view text, std::string file) : file_(std::move(file)) {
    auto lexed = tokenize(text, file_);
    tokens_ = std::move(lexed.tokens);
    diags_ = std::move(lexed.diagnostics);
  }

 protected:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  bool at_end() const { return peek().kind == TokenKind::end; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool check_word(std::string_view word) const {
    return peek().kind == TokenKind::identifier && peek().text == word;
  }

  SourcePosition position_of(const Token& t) const { return {file_, t.line, t.column}; }

  void report(std::string code, const Token& at, std::string message, std::optional<std::string> subject = {}) {
    Diagnostic d = make_error(std::move(code), std::move(message), std::move(subject));
    d.position = position_of(at);
    diags_.push_back(std::move(d));
  }

  [[noreturn]] void fail(const Token& at, std::string message) {
    report("SYNTAX_ERROR", at, std::move(message));
    throw SyntaxAbort{};
  }

  static std::string shown(const Token& t) {
    switch (t.kind) {
      case TokenKind::identifier: return "'" + t.text + "'";
      case TokenKind::string: return "string";
      case TokenKind::integer: return "integer " + t.text;
      default: return describe(t.kind);
    }
  }

  const Token& expect(TokenKind kind, std::string_view context) {
    if (peek().kind != kind)
      fail(peek(), std::string("expected ") + describe(kind) + " " + std::string(context) + ", found " + shown(peek()));
    return next();
  }

  const Token& expect_word(std::string_view word) {
    if (!check_word(word)) fail(peek(), "expected '" + std::string(word) + "', found " + shown(peek()));
    return next();
  }

  std::string expect_id(std::string_view context) { return expect(TokenKind::identifier, context).text; }

  std::vector<std::string> parse_id_list() {
    expect(TokenKind::lbracket, "to open a list");
    std::vector<std::string> items;
    if (peek().kind != TokenKind::rbracket) {
      items.push_back(expect_id("in list"));
      while (peek().kind == TokenKind::comma) {
        next();
        items.push_back(expect_id("in list"));
      }
    }
    expect(TokenKind::rbracket, "to close a list");
    return items;
  }

  // Skips to the next token that can start a top-level declaration, always
  // consuming at least one token past `start`.
  void synchronize(std::span<const std::string_view> starters, std::size_t start) {
    if (pos_ == start && !at_end()) next();
    while (!at_end()) {
      if (peek().kind == TokenKind::identifier)
        for (auto s : starters)
          if (peek().text == s) return;
      next();
    }
  }

  void unknown_keyword(const Token& at, std::string_view what) {
    report("UNKNOWN_KEYWORD", at, "unknown " + std::string(what) + " '" + at.text + "'");
  }

  std::string file_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Diagnostics diags_;
};

class ModelParser : ParserBase {
 public:
  using ParserBase::ParserBase;

  Parsed<SystemModel> run() {
    SystemModel model;
    bool seen_usecase = false;
    static constexpr std::string_view kStarters[] = {"usecase", "component", "function", "flow"};
    while (!at_end()) {
      std::size_t start = pos_;
      try {
        const Token& head = peek();
        if (check_word("usecase")) {
          if (seen_usecase) fail(head, "duplicate usecase block");
          if (!model.components.empty() || !model.functions.empty() || !model.flows.empty())
            fail(head, "usecase block must precede all declarations");
          seen_usecase = true;
          parse_usecase(model.context);
        } else if (check_word("component")) {
          parse_component(model);
        } else if (check_word("function")) {
          parse_function(model);
        } else if (check_word("flow")) {
          parse_flow(model);
        } else {
          fail(head, "expected a declaration (usecase, component, function, flow), found " + shown(head));
        }
      } catch (const SyntaxAbort&) {
        synchronize(kStarters, start);
      }
    }
    Parsed<SystemModel> out;
    out.diagnostics = std::move(diags_);
    if (!has_errors(out.diagnostics)) out.value = std::move(model);
    return out;
  }

 private:
  template <typename Enum>
  void parse_context_value(Enum& slot, bool& seen, const Token& key, auto parse) {
    if (seen) fail(key, "duplicate '" + key.text + "' entry in usecase block");
    seen = true;
    expect(TokenKind::colon, "after '" + key.text + "'");
    const Token& v = expect(TokenKind::identifier, "as " + key.text + " value");
    if (auto parsed = parse(v.text))
      slot = *parsed;
    else
      unknown_keyword(v, key.text + " value");
  }

  void parse_usecase(UseCaseContext& ctx) {
    next();
    ctx.title = expect(TokenKind::string, "as usecase title").text;
    expect(TokenKind::lbrace, "to open usecase block");
    bool seen_op = false, seen_loc = false, seen_conn = false;
    while (peek().kind != TokenKind::rbrace) {
      const Token& key = peek();
      if (key.kind != TokenKind::identifier) fail(key, "expected usecase entry or '}', found " + shown(key));
      next();
      if (key.text == "operation") {
        parse_context_value(ctx.operation_type, seen_op, key, [](std::string_view s) -> std::optional<OperationType> {
          for (auto v : {OperationType::synchronous, OperationType::asynchronous, OperationType::unspecified})
            if (s == to_string(v)) return v;
          return std::nullopt;
        });
      } else if (key.text == "location") {
        parse_context_value(ctx.location, seen_loc, key, [](std::string_view s) -> std::optional<WorkingLocation> {
          for (auto v : {WorkingLocation::manufacturer_place, WorkingLocation::anywhere_else, WorkingLocation::unspecified})
            if (s == to_string(v)) return v;
          return std::nullopt;
        });
      } else if (key.text == "connection") {
        parse_context_value(ctx.connection, seen_conn, key, [](std::string_view s) -> std::optional<ConnectionType> {
          for (auto v : {ConnectionType::local, ConnectionType::remote, ConnectionType::unspecified})
            if (s == to_string(v)) return v;
          return std::nullopt;
        });
      } else {
        unknown_keyword(key, "usecase entry");
        throw SyntaxAbort{};
      }
    }
    next();
  }

  void declare(std::set<std::string>& ids, const Token& at, const std::string& id, std::string_view what) {
    if (!ids.insert(id).second)
      report("DUPLICATE_ID", at, "duplicate " + std::string(what) + " id '" + id + "'", id);
  }

  void parse_component(SystemModel& model) {
    next();
    const Token& id_tok = expect(TokenKind::identifier, "as component id");
    Component c;
    c.id = id_tok.text;
    if (peek().kind == TokenKind::string) c.name = next().text;
    expect_word("kind");
    expect(TokenKind::equals, "after 'kind'");
    const Token& kind = expect(TokenKind::identifier, "as component kind");
    using Tag = ComponentKind::Tag;
    if (kind.text == "custom") {
      expect(TokenKind::colon, "after 'custom'");
      c.kind = ComponentKind::custom(expect(TokenKind::string, "as custom kind label").text);
    } else {
      bool known = false;
      for (auto t : {Tag::vehicle_interface, Tag::network_link, Tag::end_device, Tag::external_entity})
        if (kind.text == to_string(t)) {
          c.kind.tag = t;
          known = true;
        }
      if (!known) unknown_keyword(kind, "component kind");
    }
    declare(component_ids_, id_tok, c.id, "component");
    model.components.push_back(std::move(c));
  }

  void parse_function(SystemModel& model) {
    next();
    const Token& id_tok = expect(TokenKind::identifier, "as function id");
    FunctionNode f;
    f.id = id_tok.text;
    f.name = expect(TokenKind::string, "as function name").text;
    expect_word("in");
    f.component = expect_id("as component reference");
    expect_word("class");
    expect(TokenKind::equals, "after 'class'");
    const Token& cls = expect(TokenKind::identifier, "as responsibility class");
    if (auto r = parse_responsibility(cls.text))
      f.responsibility = *r;
    else
      unknown_keyword(cls, "responsibility class");
    declare(function_ids_, id_tok, f.id, "function");
    model.functions.push_back(std::move(f));
  }

  Endpoint parse_endpoint() {
    const Token& t = expect(TokenKind::identifier, "as flow endpoint");
    return Endpoint{t.text};
  }

  void parse_flow(SystemModel& model) {
    next();
    const Token& id_tok = expect(TokenKind::identifier, "as flow id");
    DataFlow flow;
    flow.id = id_tok.text;
    expect(TokenKind::colon, "after flow id");
    flow.source = parse_endpoint();
    expect(TokenKind::arrow, "between flow endpoints");
    flow.sink = parse_endpoint();
    if (check_word("via")) {
      next();
      flow.via = expect_id("after 'via'");
    }
    if (check_word("payload")) {
      next();
      flow.payload = expect(TokenKind::string, "after 'payload'").text;
    }
    declare(flow_ids_, id_tok, flow.id, "flow");
    model.flows.push_back(std::move(flow));
  }

  std::set<std::string> component_ids_, function_ids_, flow_ids_;
};

class CatalogParser : ParserBase {
 public:
  using ParserBase::ParserBase;

  // Value is present whenever the text is syntactically sound; semantic
  // validation diagnostics ride along and carry declaration positions.
  Parsed<Catalog> run() {
    Catalog cat;
    static constexpr std::string_view kStarters[] = {"loss", "hazard", "ifb", "ls"};
    while (!at_end()) {
      std::size_t start = pos_;
      try {
        if (check_word("loss")) {
          next();
          Loss l;
          l.id = declare(expect(TokenKind::identifier, "as loss id"));
          l.description = expect(TokenKind::string, "as loss description").text;
          cat.losses.push_back(std::move(l));
        } else if (check_word("hazard")) {
          next();
          Hazard h;
          h.id = declare(expect(TokenKind::identifier, "as hazard id"));
          h.description = expect(TokenKind::string, "as hazard description").text;
          expect_word("losses");
          expect(TokenKind::equals, "after 'losses'");
          h.linked_losses = parse_id_list();
          cat.hazards.push_back(std::move(h));
        } else if (check_word("ifb")) {
          cat.ifb_templates.push_back(parse_ifb());
        } else if (check_word("ls")) {
          cat.ls_templates.push_back(parse_ls());
        } else {
          fail(peek(), "expected a declaration (loss, hazard, ifb, ls), found " + shown(peek()));
        }
      } catch (const SyntaxAbort&) {
        synchronize(kStarters, start);
      }
    }
    Parsed<Catalog> out;
    bool syntax_ok = !has_errors(diags_);
    out.diagnostics = std::move(diags_);
    if (!syntax_ok) return out;
    for (auto d : validate_catalog(cat)) {
      if (d.code == "DUPLICATE_ID") continue;  // already reported with position
      if (d.subject_id)
        if (auto it = positions_.find(*d.subject_id); it != positions_.end()) d.position = it->second;
      out.diagnostics.push_back(std::move(d));
    }
    out.value = std::move(cat);
    return out;
  }

 private:
  std::string declare(const Token& id_tok) {
    if (positions_.count(id_tok.text))
      report("DUPLICATE_ID", id_tok, "duplicate catalog id '" + id_tok.text + "'", id_tok.text);
    else
      positions_.emplace(id_tok.text, position_of(id_tok));
    return id_tok.text;
  }

  IfbTemplate parse_ifb() {
    next();
    IfbTemplate t;
    t.id = declare(expect(TokenKind::identifier, "as IFB template id"));
    expect_word("class");
    expect(TokenKind::equals, "after 'class'");
    const Token& cls = expect(TokenKind::identifier, "as responsibility class");
    if (auto r = parse_responsibility(cls.text))
      t.responsibility = *r;
    else
      unknown_keyword(cls, "responsibility class");
    expect_word("instructor");
    expect(TokenKind::equals, "after 'instructor'");
    const Token& major = expect(TokenKind::identifier, "as instructor category");
    expect(TokenKind::colon, "between instructor category and subcategory");
    const Token& minor = expect(TokenKind::identifier, "as instructor subcategory");
    if (auto m = parse_major(major.text))
      t.instructor.major = *m;
    else
      unknown_keyword(major, "instructor category");
    if (auto m = parse_minor(minor.text))
      t.instructor.minor = *m;
    else
      unknown_keyword(minor, "instructor subcategory");
    expect_word("hazards");
    expect(TokenKind::equals, "after 'hazards'");
    t.linked_hazards = parse_id_list();
    expect_word("text");
    expect(TokenKind::equals, "after 'text'");
    t.description_template = expect(TokenKind::string, "as IFB text").text;
    return t;
  }

  LsTemplate parse_ls() {
    next();
    LsTemplate t;
    t.id = declare(expect(TokenKind::identifier, "as LS template id"));
    expect_word("parent");
    expect(TokenKind::equals, "after 'parent'");
    t.parent_ifb = expect_id("as parent IFB");
    expect_word("category");
    expect(TokenKind::equals, "after 'category'");
    const Token& cat = expect(TokenKind::identifier, "as causal category");
    if (auto c = parse_category(cat.text))
      t.causal_category = *c;
    else
      unknown_keyword(cat, "causal category");
    expect_word("text");
    expect(TokenKind::equals, "after 'text'");
    t.description_template = expect(TokenKind::string, "as LS text").text;
    return t;
  }

  std::map<std::string, SourcePosition> positions_;
};

class OverlayParser : ParserBase {
 public:
  using ParserBase::ParserBase;

  Parsed<Overlay> run() {
    Overlay ov;
    std::set<std::string> targets;
    static constexpr std::string_view kStarters[] = {"refine"};
    while (!at_end()) {
      std::size_t start = pos_;
      try {
        const Token& head = peek();
        if (!check_word("refine")) fail(head, "expected 'refine', found " + shown(head));
        next();
        const Token& target = expect(TokenKind::identifier, "as refinement target");
        Refinement r;
        r.target = target.text;
        r.position = position_of(head);
        if (!targets.insert(r.target).second)
          report("DUPLICATE_ID", target, "target '" + r.target + "' is refined twice", r.target);
        expect(TokenKind::lbrace, "to open refinement");
        while (peek().kind != TokenKind::rbrace) r.variants.push_back(parse_variant(r));
        next();
        ov.refinements.push_back(std::move(r));
      } catch (const SyntaxAbort&) {
        synchronize(kStarters, start);
      }
    }
    Parsed<Overlay> out;
    out.diagnostics = std::move(diags_);
    if (!has_errors(out.diagnostics)) out.value = std::move(ov);
    return out;
  }

 private:
  IfbVariant parse_variant(const Refinement& r) {
    expect_word("ifb");
    const Token& idx = expect(TokenKind::integer, "as variant index");
    IfbVariant v;
    v.index = static_cast<int>(idx.number);
    int expected = static_cast<int>(r.variants.size()) + 1;
    if (v.index != expected) {
      bool dup = false;
      for (const auto& prior : r.variants) dup = dup || prior.index == v.index;
      if (dup)
        report("DUPLICATE_VARIANT", idx, "variant " + idx.text + " of '" + r.target + "' declared twice", r.target);
      else
        report("NONCONTIGUOUS_INDEX", idx,
               "variant index " + idx.text + " of '" + r.target + "' should be " + std::to_string(expected), r.target);
    }
    v.description = expect(TokenKind::string, "as variant description").text;
    if (check_word("hazards")) {
      next();
      expect(TokenKind::equals, "after 'hazards'");
      v.hazards = parse_id_list();
    }
    if (peek().kind == TokenKind::lbrace) {
      next();
      std::set<std::pair<std::string, std::int64_t>> seen;
      while (peek().kind != TokenKind::rbrace) {
        expect_word("ls");
        LsVariant lv;
        lv.ls_template = expect_id("as LS template reference");
        expect(TokenKind::dot, "between LS template and variant index");
        const Token& li = expect(TokenKind::integer, "as LS variant index");
        lv.index = static_cast<int>(li.number);
        if (lv.index < 1) report("SYNTAX_ERROR", li, "LS variant index must be at least 1");
        if (!seen.insert({lv.ls_template, li.number}).second)
          report("DUPLICATE_VARIANT", li, lv.ls_template + "." + li.text + " declared twice in one variant", r.target);
        lv.description = expect(TokenKind::string, "as LS variant description").text;
        if (check_word("prevent")) {
          next();
          expect(TokenKind::equals, "after 'prevent'");
          lv.prevent_text = expect(TokenKind::string, "as inversion constraint text").text;
        }
        if (check_word("react")) {
          next();
          expect(TokenKind::equals, "after 'react'");
          lv.react_text = expect(TokenKind::string, "as reaction constraint text").text;
        }
        v.ls_variants.push_back(std::move(lv));
      }
      next();
    }
    return v;
  }
};

}  // namespace detail

inline Parsed<SystemModel> parse_model(std::string_view text, std::string file = {}) {
  return detail::ModelParser(text, std::move(file)).run();
}

/// Syntax-level catalog read: the catalog is returned whenever it parses,
/// with validation findings attached as diagnostics.
inline Parsed<Catalog> read_catalog(std::string_view text, std::string file = {}) {
  return detail::CatalogParser(text, std::move(file)).run();
}

/// Strict catalog parse: no value if any parse or validation error occurred.
inline Parsed<Catalog> parse_catalog(std::string_view text, std::string file = {}) {
  auto out = read_catalog(text, std::move(file));
  if (has_errors(out.diagnostics)) out.value.reset();
  return out;
}

inline Parsed<Overlay> parse_overlay(std::string_view text, std::string file = {}) {
  return detail::OverlayParser(text, std::move(file)).run();
}

inline std::string serialize_model(const SystemModel& model) {
  std::string out;
  const auto& ctx = model.context;
  if (!ctx.is_default()) {
    out += "usecase " + quote(ctx.title) + " {\n";
    if (ctx.operation_type != OperationType::unspecified)
      out += std::string("  operation: ") + to_string(ctx.operation_type) + "\n";
    if (ctx.location != WorkingLocation::unspecified)
      out += std::string("  location: ") + to_string(ctx.location) + "\n";
    if (ctx.connection != ConnectionType::unspecified)
      out += std::string("  connection: ") + to_string(ctx.connection) + "\n";
    out += "}\n";
  }
  for (const auto& c : model.components) {
    out += "component " + c.id;
    if (!c.name.empty()) out += " " + quote(c.name);
    out += " kind=";
    out += c.kind.tag == ComponentKind::Tag::custom ? "custom:" + quote(c.kind.label) : to_string(c.kind.tag);
    out += "\n";
  }
  for (const auto& f : model.functions)
    out += "function " + f.id + " " + quote(f.name) + " in " + f.component + " class=" + to_string(f.responsibility) + "\n";
  for (const auto& f : model.flows) {
    out += "flow " + f.id + ": " + f.source.function + " -> " + f.sink.function;
    if (f.via) out += " via " + *f.via;
    if (f.payload) out += " payload " + quote(*f.payload);
    out += "\n";
  }
  return out;
}

inline std::string serialize_catalog(const Catalog& catalog) {
  auto list = [](const std::vector<std::string>& ids) {
    std::string s = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? ", " : "") + ids[i];
    return s + "]";
  };
  std::string out;
  for (const auto& l : catalog.losses) out += "loss " + l.id + " " + quote(l.description) + "\n";
  if (!catalog.hazards.empty()) out += "\n";
  for (const auto& h : catalog.hazards)
    out += "hazard " + h.id + " " + quote(h.description) + " losses=" + list(h.linked_losses) + "\n";
  if (!catalog.ifb_templates.empty()) out += "\n";
  for (const auto& t : catalog.ifb_templates) {
    out += "ifb " + t.id + " class=" + to_string(t.responsibility) + " instructor=" + to_string(t.instructor.major) +
           ":" + to_string(t.instructor.minor) + " hazards=" + list(t.linked_hazards) + "\n";
    out += "    text=" + quote(t.description_template) + "\n";
  }
  if (!catalog.ls_templates.empty()) out += "\n";
  for (const auto& t : catalog.ls_templates) {
    out += "ls " + t.id + " parent=" + t.parent_ifb + " category=" + to_string(t.causal_category) + "\n";
    out += "    text=" + quote(t.description_template) + "\n";
  }
  return out;
}

}  // namespace dsl
}  // namespace fisa
