#include "qdt/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "qdt/error.hpp"
#include "qdt/tree.hpp"

namespace qdt {

const char* sexpr_op_name(SexprOp op) {
  switch (op) {
    case SexprOp::op_and:
      return "AND";
    case SexprOp::op_join:
      return "JOIN";
    case SexprOp::op_reverse:
      return "R";
    case SexprOp::op_count:
      return "COUNT";
    case SexprOp::op_argmax:
      return "ARGMAX";
    case SexprOp::op_argmin:
      return "ARGMIN";
    case SexprOp::op_lt:
      return "LT";
    case SexprOp::op_le:
      return "LE";
    case SexprOp::op_gt:
      return "GT";
    case SexprOp::op_ge:
      return "GE";
  }
  return "?";
}

std::size_t sexpr_op_arity(SexprOp op) {
  switch (op) {
    case SexprOp::op_reverse:
    case SexprOp::op_count:
      return 1;
    default:
      return 2;
  }
}

namespace {

bool lookup_op(std::string_view text, SexprOp& op) {
  static constexpr std::pair<const char*, SexprOp> kOps[] = {
      {"AND", SexprOp::op_and},       {"JOIN", SexprOp::op_join},
      {"R", SexprOp::op_reverse},     {"COUNT", SexprOp::op_count},
      {"ARGMAX", SexprOp::op_argmax}, {"ARGMIN", SexprOp::op_argmin},
      {"LT", SexprOp::op_lt},         {"LE", SexprOp::op_le},
      {"GT", SexprOp::op_gt},         {"GE", SexprOp::op_ge},
  };
  for (const auto& [name, value] : kOps) {
    if (text == name) {
      op = value;
      return true;
    }
  }
  return false;
}

SExpr classify_atom(std::string_view text, const SexprOptions& options) {
  SExpr expr;
  for (const std::string& prefix : options.entity_prefixes) {
    if (text.size() > prefix.size() && text.substr(0, prefix.size()) == prefix) {
      expr.kind = SExpr::Kind::entity;
      expr.text = std::string(text);
      return expr;
    }
  }
  if (text.find('.') != std::string_view::npos) {
    expr.kind = SExpr::Kind::relation;
    expr.text = std::string(text);
    return expr;
  }
  expr.kind = SExpr::Kind::literal;
  std::size_t tag = text.find("^^");
  if (tag != std::string_view::npos) {
    expr.text = std::string(text.substr(0, tag));
    expr.type_tag = std::string(text.substr(tag + 2));
  } else {
    expr.text = std::string(text);
  }
  return expr;
}

class SexprParser {
 public:
  SexprParser(std::string_view text, const SexprOptions& options)
      : text_(text), options_(options) {}

  SExpr parse() {
    SExpr expr = parse_expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw Error(Errc::syntax_error,
                  "trailing input at position " + std::to_string(pos_));
    }
    return expr;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string_view read_atom() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ == start) {
      throw Error(Errc::syntax_error,
                  "expected an expression at position " + std::to_string(pos_));
    }
    return text_.substr(start, pos_ - start);
  }

  SExpr parse_expr() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw Error(Errc::syntax_error, "unexpected end of input");
    }
    if (text_[pos_] != '(') {
      if (text_[pos_] == ')') {
        throw Error(Errc::syntax_error,
                    "unexpected ')' at position " + std::to_string(pos_));
      }
      return classify_atom(read_atom(), options_);
    }

    std::size_t open = pos_++;
    skip_space();
    std::string_view head = read_atom();
    SExpr expr;
    expr.kind = SExpr::Kind::apply;
    if (!lookup_op(head, expr.op)) {
      throw Error(Errc::syntax_error, "unknown operator '" + std::string(head) +
                                          "' at position " + std::to_string(open));
    }
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        throw Error(Errc::syntax_error,
                    "missing ')' for '(' at position " + std::to_string(open));
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      expr.args.push_back(parse_expr());
    }
    if (expr.args.size() != sexpr_op_arity(expr.op)) {
      throw Error(Errc::arity_error,
                  std::string(sexpr_op_name(expr.op)) + " takes " +
                      std::to_string(sexpr_op_arity(expr.op)) +
                      " arguments, got " + std::to_string(expr.args.size()));
    }
    return expr;
  }

  std::string_view text_;
  const SexprOptions& options_;
  std::size_t pos_ = 0;
};

}  // namespace

bool SExpr::operator==(const SExpr& other) const {
  if (kind != other.kind) return false;
  if (kind == Kind::apply) {
    return op == other.op && args == other.args;
  }
  return text == other.text && type_tag == other.type_tag;
}

SExpr parse_sexpr(std::string_view text, const SexprOptions& options) {
  SexprParser parser(text, options);
  return parser.parse();
}

std::string render(const SExpr& expr) {
  switch (expr.kind) {
    case SExpr::Kind::apply: {
      std::string out = "(";
      out += sexpr_op_name(expr.op);
      for (const SExpr& arg : expr.args) {
        out.push_back(' ');
        out += render(arg);
      }
      out.push_back(')');
      return out;
    }
    case SExpr::Kind::literal:
      return expr.type_tag.empty() ? expr.text : expr.text + "^^" + expr.type_tag;
    default:
      return expr.text;
  }
}

void EntityLabelMap::add(std::string id, std::string label) {
  auto [it, inserted] = label_by_id_.emplace(id, label);
  if (!inserted) {
    throw Error(Errc::invalid_input, "duplicate entity id '" + id + "'");
  }
  ids_by_label_[std::move(label)].push_back(std::move(id));
}

const std::string* EntityLabelMap::label_of(const std::string& id) const {
  auto it = label_by_id_.find(id);
  return it == label_by_id_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* EntityLabelMap::ids_of(
    const std::string& label) const {
  auto it = ids_by_label_.find(label);
  return it == ids_by_label_.end() ? nullptr : &it->second;
}

EntityLabelMap EntityLabelMap::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io_error, "cannot open label map '" + path.string() + "'");
  }
  EntityLabelMap map;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(Errc::io_error, path.string() + ":" +
                                      std::to_string(line_number) +
                                      ": expected two tab-separated columns");
    }
    map.add(line.substr(0, tab), line.substr(tab + 1));
  }
  return map;
}

namespace {

std::string relation_word_list(std::string_view dotted) {
  std::string out;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    std::size_t dot = dotted.find('.', start);
    std::string_view segment = dotted.substr(
        start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (!out.empty()) out += ", ";
    for (char c : segment) out.push_back(c == '_' ? ' ' : c);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

std::string word_list_to_dotted(std::string_view words) {
  std::string out;
  std::size_t start = 0;
  while (start <= words.size()) {
    std::size_t comma = words.find(", ", start);
    std::string_view segment = words.substr(
        start,
        comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!out.empty()) out.push_back('.');
    for (char c : segment) out.push_back(c == ' ' ? '_' : c);
    if (comma == std::string_view::npos) break;
    start = comma + 2;
  }
  return out;
}

}  // namespace

std::string normalize(const SExpr& expr, const EntityLabelMap& labels) {
  switch (expr.kind) {
    case SExpr::Kind::apply: {
      std::string out = "(";
      out += sexpr_op_name(expr.op);
      for (const SExpr& arg : expr.args) {
        out.push_back(' ');
        out += normalize(arg, labels);
      }
      out.push_back(')');
      return out;
    }
    case SExpr::Kind::entity: {
      const std::string* label = labels.label_of(expr.text);
      if (label == nullptr) {
        throw Error(Errc::unknown_entity, "no label for entity '" + expr.text + "'");
      }
      return "[" + *label + "]";
    }
    case SExpr::Kind::relation:
    case SExpr::Kind::klass:
      return "[" + relation_word_list(expr.text) + "]";
    case SExpr::Kind::literal:
      return "[" +
             (expr.type_tag.empty() ? expr.text : expr.text + "^^" + expr.type_tag) +
             "]";
  }
  return {};
}

namespace {

class DenormalizeParser {
 public:
  DenormalizeParser(std::string_view text, const EntityLabelMap& labels,
                    const std::set<std::string>& relation_vocab,
                    const std::vector<std::string>* candidates,
                    const SexprOptions& options)
      : text_(text),
        labels_(labels),
        relation_vocab_(relation_vocab),
        candidates_(candidates),
        options_(options) {}

  SExpr parse() {
    SExpr expr = parse_expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw Error(Errc::syntax_error,
                  "trailing input at position " + std::to_string(pos_));
    }
    return expr;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  SExpr parse_expr() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw Error(Errc::syntax_error, "unexpected end of input");
    }
    if (text_[pos_] == '[') return parse_element();
    if (text_[pos_] != '(') {
      throw Error(Errc::unknown_element,
                  "expected a bracketed element or '(' at position " +
                      std::to_string(pos_));
    }

    std::size_t open = pos_++;
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != '[') {
      ++pos_;
    }
    SExpr expr;
    expr.kind = SExpr::Kind::apply;
    if (!lookup_op(text_.substr(start, pos_ - start), expr.op)) {
      throw Error(Errc::syntax_error,
                  "unknown operator at position " + std::to_string(start));
    }
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        throw Error(Errc::syntax_error,
                    "missing ')' for '(' at position " + std::to_string(open));
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      expr.args.push_back(parse_expr());
    }
    if (expr.args.size() != sexpr_op_arity(expr.op)) {
      throw Error(Errc::arity_error,
                  std::string(sexpr_op_name(expr.op)) + " takes " +
                      std::to_string(sexpr_op_arity(expr.op)) +
                      " arguments, got " + std::to_string(expr.args.size()));
    }
    return expr;
  }

  SExpr parse_element() {
    std::size_t open = pos_++;
    std::size_t close = text_.find(']', pos_);
    if (close == std::string_view::npos) {
      throw Error(Errc::syntax_error,
                  "missing ']' for '[' at position " + std::to_string(open));
    }
    std::string content(text_.substr(pos_, close - pos_));
    pos_ = close + 1;
    return resolve(content);
  }

  SExpr resolve(const std::string& content) const {
    // Relation first: the word list reassembles to a vocabulary entry.
    std::string dotted = word_list_to_dotted(content);
    if (relation_vocab_.count(dotted) > 0) {
      SExpr expr;
      expr.kind = SExpr::Kind::relation;
      expr.text = dotted;
      return expr;
    }
    // Then an entity label.
    if (const std::vector<std::string>* ids = labels_.ids_of(content)) {
      SExpr expr;
      expr.kind = SExpr::Kind::entity;
      if (ids->size() == 1) {
        expr.text = (*ids)[0];
        return expr;
      }
      if (candidates_ != nullptr) {
        for (const std::string& candidate : *candidates_) {
          if (std::find(ids->begin(), ids->end(), candidate) != ids->end()) {
            expr.text = candidate;
            return expr;
          }
        }
      }
      throw Error(Errc::ambiguous_label,
                  "label '" + content + "' maps to " +
                      std::to_string(ids->size()) + " entities");
    }
    // A comma-separated word list that is neither a known relation nor a
    // label is a fabricated KB element, not a literal.
    if (content.find(", ") != std::string::npos) {
      throw Error(Errc::unknown_element,
                  "'" + content + "' is not in the relation vocabulary");
    }
    return classify_literal(content);
  }

  static SExpr classify_literal(const std::string& content) {
    SExpr expr;
    expr.kind = SExpr::Kind::literal;
    std::size_t tag = content.find("^^");
    if (tag != std::string::npos) {
      expr.text = content.substr(0, tag);
      expr.type_tag = content.substr(tag + 2);
    } else {
      expr.text = content;
    }
    return expr;
  }

  std::string_view text_;
  const EntityLabelMap& labels_;
  const std::set<std::string>& relation_vocab_;
  const std::vector<std::string>* candidates_;
  const SexprOptions& options_;
  std::size_t pos_ = 0;
};

}  // namespace

SExpr denormalize(std::string_view text, const EntityLabelMap& labels,
                  const std::set<std::string>& relation_vocab,
                  const std::vector<std::string>* candidates,
                  const SexprOptions& options) {
  DenormalizeParser parser(text, labels, relation_vocab, candidates, options);
  return parser.parse();
}

std::string assemble_model_input(const TokenSeq& question, const TokenSeq& qdt,
                                 std::span<const std::string> entity_labels,
                                 std::string_view delimiter, CaseMode mode) {
  ValidationReport report = validate(qdt, &question, mode);
  if (!report.valid) {
    throw Error(Errc::validation_failure,
                "linearization does not match the question");
  }
  std::string out = join(question);
  out += " ";
  out += delimiter;
  out += " ";
  out += join(qdt);
  out += " ";
  out += delimiter;
  if (!entity_labels.empty()) {
    out += " ";
    for (std::size_t i = 0; i < entity_labels.size(); ++i) {
      if (i > 0) out += "; ";
      out += entity_labels[i];
    }
  }
  return out;
}

}  // namespace qdt
