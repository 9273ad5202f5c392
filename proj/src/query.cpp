#include <atlas/query.hpp>

#include <algorithm>
#include <map>

namespace atlas {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Word, String, Le, Eq, Ne, Tilde, LParen, RParen, End };

struct Token {
    Tok type = Tok::End;
    std::string text;  // raw word, or decoded string contents
    SourcePosition pos;
};

std::string describe(const Token& t) {
    switch (t.type) {
        case Tok::Word: return "`" + t.text + "`";
        case Tok::String: return "string literal";
        case Tok::Le: return "`<=`";
        case Tok::Eq: return "`=`";
        case Tok::Ne: return "`!=`";
        case Tok::Tilde: return "`~`";
        case Tok::LParen: return "`(`";
        case Tok::RParen: return "`)`";
        case Tok::End: return "end of input";
    }
    return "token";
}

[[noreturn]] void syntax_error(SourcePosition pos, std::vector<std::string> expected, std::string found) {
    std::string message = "syntax error at line " + std::to_string(pos.line) + ", column " +
                          std::to_string(pos.column) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) message += i + 1 == expected.size() ? " or " : ", ";
        message += expected[i];
    }
    message += ", found " + found;
    throw QuerySyntaxError(message, pos, std::move(expected), std::move(found));
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    SourcePosition pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    auto is_word_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_word_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        Token t;
        t.pos = pos;
        if (is_word_start(c)) {
            std::size_t j = i;
            while (j < src.size() && is_word_char(src[j])) ++j;
            t.type = Tok::Word;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == '"') {
            advance();
            t.type = Tok::String;
            bool closed = false;
            while (i < src.size()) {
                char ch = src[i];
                if (ch == '"') {
                    advance();
                    closed = true;
                    break;
                }
                if (ch == '\\') {
                    if (i + 1 >= src.size()) break;
                    const SourcePosition escape_pos = pos;
                    char e = src[i + 1];
                    switch (e) {
                        case '"': t.text += '"'; break;
                        case '\\': t.text += '\\'; break;
                        case 'n': t.text += '\n'; break;
                        case 't': t.text += '\t'; break;
                        default:
                            syntax_error(escape_pos, {"escape sequence \\\" \\\\ \\n or \\t"},
                                         "`\\" + std::string(1, e) + "`");
                    }
                    advance(2);
                    continue;
                }
                t.text += ch;
                advance();
            }
            if (!closed) syntax_error(t.pos, {"closing `\"`"}, "end of input");
        } else if (c == '<' && i + 1 < src.size() && src[i + 1] == '=') {
            t.type = Tok::Le;
            advance(2);
        } else if (c == '!' && i + 1 < src.size() && src[i + 1] == '=') {
            t.type = Tok::Ne;
            advance(2);
        } else if (c == '=') {
            t.type = Tok::Eq;
            advance();
        } else if (c == '~') {
            t.type = Tok::Tilde;
            advance();
        } else if (c == '(') {
            t.type = Tok::LParen;
            advance();
        } else if (c == ')') {
            t.type = Tok::RParen;
            advance();
        } else {
            syntax_error(pos, {"a word, string, operator or parenthesis"}, "`" + std::string(1, c) + "`");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = pos;
    out.push_back(end);
    return out;
}

// ---------------------------------------------------------------------------
// Parser

const std::map<NodeKind, std::vector<std::string>> kFields = {
    {NodeKind::Dataset,
     {"id", "title", "description", "source_url", "license", "license_open", "doi", "size_description",
      "size_bytes", "start_year", "end_year", "maintained_by", "provenance_kind", "validation_status"}},
    {NodeKind::Publication, {"id", "title", "year", "venue", "doi"}},
    {NodeKind::Tool, {"id", "name", "url"}},
    {NodeKind::Organization, {"id", "name", "url"}},
    {NodeKind::TaxonomyTerm, {"id", "label"}},
};

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    Query parse() {
        Query q;
        expect_keyword("FIND");
        const Token& kind = peek();
        auto target = kind.type == Tok::Word ? query_kind(lower(kind.text)) : std::nullopt;
        if (!target) syntax_error(kind.pos, {"`dataset`", "`publication`", "`tool`", "`organization`"}, describe(kind));
        q.target = *target;
        target_ = *target;
        ++at_;
        if (is_keyword(peek(), "WHERE")) {
            ++at_;
            q.where = parse_or();
        }
        if (peek().type != Tok::End) {
            syntax_error(peek().pos, q.where ? std::vector<std::string>{"`AND`", "`OR`", "end of input"}
                                             : std::vector<std::string>{"`WHERE`", "end of input"},
                         describe(peek()));
        }
        return q;
    }

private:
    static std::optional<NodeKind> query_kind(const std::string& word) {
        if (word == "dataset") return NodeKind::Dataset;
        if (word == "publication") return NodeKind::Publication;
        if (word == "tool") return NodeKind::Tool;
        if (word == "organization") return NodeKind::Organization;
        return std::nullopt;
    }

    static bool is_keyword(const Token& t, std::string_view upper) {
        if (t.type != Tok::Word || t.text.size() != upper.size()) return false;
        for (std::size_t i = 0; i < upper.size(); ++i) {
            if (std::toupper(static_cast<unsigned char>(t.text[i])) != upper[i]) return false;
        }
        return true;
    }

    static bool is_reserved(const Token& t) {
        for (auto kw : {"FIND", "WHERE", "AND", "OR", "NOT", "ANY"}) {
            if (is_keyword(t, kw)) return true;
        }
        return false;
    }

    const Token& peek() const { return tokens_[at_]; }

    void expect_keyword(std::string_view upper) {
        if (!is_keyword(peek(), upper)) syntax_error(peek().pos, {"`" + std::string(upper) + "`"}, describe(peek()));
        ++at_;
    }

    std::string expect_string() {
        if (peek().type != Tok::String) syntax_error(peek().pos, {"string literal"}, describe(peek()));
        return tokens_[at_++].text;
    }

    Expr parse_or() {
        std::vector<Expr> parts{parse_and()};
        while (is_keyword(peek(), "OR")) {
            ++at_;
            parts.push_back(parse_and());
        }
        return parts.size() == 1 ? std::move(parts.front()) : Expr::any_of(std::move(parts));
    }

    Expr parse_and() {
        std::vector<Expr> parts{parse_unary()};
        while (is_keyword(peek(), "AND")) {
            ++at_;
            parts.push_back(parse_unary());
        }
        return parts.size() == 1 ? std::move(parts.front()) : Expr::all_of(std::move(parts));
    }

    Expr parse_unary() {
        const Token& t = peek();
        if (is_keyword(t, "NOT")) {
            ++at_;
            return Expr::negate(parse_unary());
        }
        if (t.type == Tok::LParen) {
            ++at_;
            Expr inner = parse_or();
            if (peek().type != Tok::RParen) syntax_error(peek().pos, {"`)`", "`AND`", "`OR`"}, describe(peek()));
            ++at_;
            return inner;
        }
        if (t.type != Tok::Word || is_reserved(t)) {
            syntax_error(t.pos, {"`NOT`", "`(`", "dimension", "edge kind", "field name"}, describe(t));
        }
        return parse_pred();
    }

    Expr parse_pred() {
        const Token& name = tokens_[at_++];
        const std::string word = lower(name.text);

        if (auto dimension = dimension_from_string(word)) {
            if (peek().type != Tok::Le) syntax_error(peek().pos, {"`<=`"}, describe(peek()));
            ++at_;
            return Expr::facet_pred(*dimension, expect_string());
        }
        if (auto edge = edge_kind_from_string(word)) {
            if (is_keyword(peek(), "ANY")) {
                ++at_;
                return Expr::edge_pred(*edge, std::nullopt);
            }
            if (peek().type == Tok::String) return Expr::edge_pred(*edge, expect_string());
            // maintained_by is both an edge kind and a dataset field; an operator picks the field.
            const Tok t = peek().type;
            if (t != Tok::Eq && t != Tok::Ne && t != Tok::Tilde) {
                syntax_error(peek().pos, {"`ANY`", "string literal"}, describe(peek()));
            }
        }

        const Token& next = peek();
        if (is_keyword(next, "ANY") || next.type == Tok::String) {
            throw Error(ErrorCode::UnknownEdgeKind, "unknown edge kind '" + name.text + "' at line " +
                                                        std::to_string(name.pos.line) + ", column " +
                                                        std::to_string(name.pos.column),
                        name.pos);
        }
        CompareOp op;
        switch (next.type) {
            case Tok::Eq: op = CompareOp::Eq; break;
            case Tok::Ne: op = CompareOp::Ne; break;
            case Tok::Tilde: op = CompareOp::Contains; break;
            default: syntax_error(next.pos, {"`=`", "`!=`", "`~`", "`<=`"}, describe(next));
        }
        const auto& fields = kFields.at(target_);
        if (std::find(fields.begin(), fields.end(), word) == fields.end()) {
            throw Error(ErrorCode::UnknownField, "unknown " + std::string(to_string(target_)) + " field '" +
                                                     name.text + "' at line " + std::to_string(name.pos.line) +
                                                     ", column " + std::to_string(name.pos.column),
                        name.pos);
        }
        ++at_;
        return Expr::field_pred(word, op, expect_string());
    }

    std::vector<Token> tokens_;
    std::size_t at_ = 0;
    NodeKind target_ = NodeKind::Dataset;
};

// ---------------------------------------------------------------------------
// Printer

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
        } else if (c == '\t') {
            out += "\\t";
        } else {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
    }
    return out + '"';
}

void print(const Expr& e, std::string& out) {
    auto child = [&](const Expr& c) {
        const bool group = c.kind == ExprKind::And || c.kind == ExprKind::Or;
        if (group) out += '(';
        print(c, out);
        if (group) out += ')';
    };
    switch (e.kind) {
        case ExprKind::And:
        case ExprKind::Or:
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += e.kind == ExprKind::And ? " AND " : " OR ";
                child(e.children[i]);
            }
            break;
        case ExprKind::Not:
            out += "NOT ";
            child(e.children.front());
            break;
        case ExprKind::Field:
            out += e.field;
            out += e.op == CompareOp::Eq ? " = " : e.op == CompareOp::Ne ? " != " : " ~ ";
            out += quote(e.value);
            break;
        case ExprKind::Facet:
            out += std::string(to_string(e.dimension)) + " <= " + quote(e.term);
            break;
        case ExprKind::Edge:
            out += std::string(to_string(e.edge)) + " " + (e.target ? quote(*e.target) : "ANY");
            break;
    }
}

// ---------------------------------------------------------------------------
// Evaluation

std::string field_value(const Catalog& catalog, NodeKind kind, const NodeId& id, const std::string& field) {
    auto opt = [](const auto& o) { return o ? std::string(*o) : std::string(); };
    switch (kind) {
        case NodeKind::Dataset: {
            const DatasetRecord& r = catalog.datasets.at(id);
            if (field == "id") return id.str();
            if (field == "title") return r.title;
            if (field == "description") return r.description;
            if (field == "source_url") return r.source_url;
            if (field == "license") return r.license;
            if (field == "license_open") return r.license_open ? "true" : "false";
            if (field == "doi") return opt(r.doi);
            if (field == "size_description") return r.size_description;
            if (field == "size_bytes") return r.size_bytes ? std::to_string(*r.size_bytes) : "";
            if (field == "start_year" && r.temporal_coverage && r.temporal_coverage->start_year) {
                return std::to_string(*r.temporal_coverage->start_year);
            }
            if (field == "end_year" && r.temporal_coverage && r.temporal_coverage->end_year) {
                return std::to_string(*r.temporal_coverage->end_year);
            }
            if (field == "maintained_by") return r.maintained_by ? r.maintained_by->str() : "";
            if (field == "provenance_kind" && r.provenance) {
                return r.provenance->kind == ProvenanceKind::Real ? "real" : "synthetic";
            }
            if (field == "validation_status" && r.provenance && r.provenance->validation_status) {
                switch (*r.provenance->validation_status) {
                    case ValidationStatus::Unvalidated: return "unvalidated";
                    case ValidationStatus::PartiallyValidated: return "partially-validated";
                    case ValidationStatus::Validated: return "validated";
                }
            }
            return "";
        }
        case NodeKind::Publication: {
            const PublicationRecord& r = catalog.publications.at(id);
            if (field == "id") return id.str();
            if (field == "title") return r.title;
            if (field == "year") return std::to_string(r.year);
            if (field == "venue") return opt(r.venue);
            if (field == "doi") return opt(r.doi);
            return "";
        }
        case NodeKind::Tool: {
            const ToolRecord& r = catalog.tools.at(id);
            if (field == "id") return id.str();
            if (field == "name") return r.name;
            if (field == "url") return opt(r.url);
            return "";
        }
        case NodeKind::Organization: {
            const OrganizationRecord& r = catalog.organizations.at(id);
            if (field == "id") return id.str();
            if (field == "name") return r.name;
            if (field == "url") return opt(r.url);
            return "";
        }
        case NodeKind::TaxonomyTerm: {
            if (field == "id") return id.str();
            if (field == "label") return catalog.taxonomy.term(id).label;
            return "";
        }
    }
    return "";
}

class Evaluator {
public:
    Evaluator(const Catalog& catalog, NodeKind kind)
        : catalog_(catalog), kind_(kind), universe_(catalog.graph.nodes_of_kind(kind)) {}

    const std::vector<NodeId>& universe() const { return universe_; }

    std::vector<bool> eval(const Expr& e) const {
        const std::size_t n = universe_.size();
        switch (e.kind) {
            case ExprKind::And: {
                std::vector<bool> acc(n, true);
                for (const Expr& c : e.children) {
                    auto part = eval(c);
                    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] && part[i];
                }
                return acc;
            }
            case ExprKind::Or: {
                std::vector<bool> acc(n, false);
                for (const Expr& c : e.children) {
                    auto part = eval(c);
                    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] || part[i];
                }
                return acc;
            }
            case ExprKind::Not: {
                auto part = eval(e.children.front());
                part.flip();
                return part;
            }
            default: break;
        }
        std::vector<bool> out(n, false);
        for (std::size_t i = 0; i < n; ++i) out[i] = matches(e, universe_[i]);
        return out;
    }

private:
    bool matches(const Expr& e, const NodeId& id) const {
        switch (e.kind) {
            case ExprKind::Field: {
                const std::string value = field_value(catalog_, kind_, id, e.field);
                if (e.op == CompareOp::Eq) return value == e.value;
                if (e.op == CompareOp::Ne) return value != e.value;
                return lower(value).find(lower(e.value)) != std::string::npos;
            }
            case ExprKind::Facet: {
                const NodeId term(e.term);
                for (const auto& [kind, dst] : catalog_.graph.out_edges(id)) {
                    if (kind != EdgeKind::ClassifiedAs && kind != EdgeKind::CompatibleWith) continue;
                    if (catalog_.taxonomy.is_at_or_below(dst, term)) return true;
                }
                return false;
            }
            case ExprKind::Edge: {
                const auto& out = catalog_.graph.out_edges(id);
                if (!e.target) {
                    return std::any_of(out.begin(), out.end(), [&](const auto& p) { return p.first == e.edge; });
                }
                return out.count({e.edge, NodeId(*e.target)}) != 0;
            }
            default: return false;
        }
    }

    const Catalog& catalog_;
    NodeKind kind_;
    std::vector<NodeId> universe_;
};

void resolve_in_place(Expr& e, const Taxonomy& taxonomy) {
    if (e.kind == ExprKind::Facet) e.term = taxonomy.resolve(e.dimension, e.term).id.str();
    for (Expr& c : e.children) resolve_in_place(c, taxonomy);
}

void check_edge_targets(const Expr& e, const Graph& graph) {
    if (e.kind == ExprKind::Edge && e.target) {
        if (!NodeId::is_valid(*e.target) || !graph.contains(NodeId(*e.target))) {
            throw Error(ErrorCode::UnknownNode, "edge target '" + *e.target + "' does not exist");
        }
    }
    for (const Expr& c : e.children) check_edge_targets(c, graph);
}

}  // namespace

Expr Expr::all_of(std::vector<Expr> children) {
    Expr e;
    e.kind = ExprKind::And;
    e.children = std::move(children);
    return e;
}

Expr Expr::any_of(std::vector<Expr> children) {
    Expr e;
    e.kind = ExprKind::Or;
    e.children = std::move(children);
    return e;
}

Expr Expr::negate(Expr operand) {
    Expr e;
    e.kind = ExprKind::Not;
    e.children.push_back(std::move(operand));
    return e;
}

Expr Expr::field_pred(std::string field, CompareOp op, std::string value) {
    Expr e;
    e.kind = ExprKind::Field;
    e.field = std::move(field);
    e.op = op;
    e.value = std::move(value);
    return e;
}

Expr Expr::facet_pred(Dimension dimension, std::string term) {
    Expr e;
    e.kind = ExprKind::Facet;
    e.dimension = dimension;
    e.term = std::move(term);
    return e;
}

Expr Expr::edge_pred(EdgeKind edge, std::optional<std::string> target) {
    Expr e;
    e.kind = ExprKind::Edge;
    e.edge = edge;
    e.target = std::move(target);
    return e;
}

QuerySyntaxError::QuerySyntaxError(const std::string& message, SourcePosition position,
                                   std::vector<std::string> expected, std::string found)
    : Error(ErrorCode::SyntaxError, message, position), expected_(std::move(expected)), found_(std::move(found)) {}

const std::vector<std::string>& queryable_fields(NodeKind kind) { return kFields.at(kind); }

Query parse_query(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Query& query) {
    std::string out = "FIND " + std::string(to_string(query.target));
    if (query.where) {
        out += " WHERE ";
        print(*query.where, out);
    }
    return out;
}

Query resolve_query(const Query& query, const Taxonomy& taxonomy) {
    Query out = query;
    if (out.where) resolve_in_place(*out.where, taxonomy);
    return out;
}

ResultSet evaluate_query(const Catalog& catalog, const Query& query) {
    const Query resolved = resolve_query(query, catalog.taxonomy);
    if (resolved.where) check_edge_targets(*resolved.where, catalog.graph);

    Evaluator evaluator(catalog, resolved.target);
    ResultSet out;
    if (!resolved.where) {
        out.ids = evaluator.universe();
    } else {
        auto mask = evaluator.eval(*resolved.where);
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask[i]) out.ids.push_back(evaluator.universe()[i]);
        }
    }
    out.total = out.ids.size();
    return out;
}

Query selection_to_query(const FacetSelection& selection) {
    std::vector<Expr> conjuncts;
    for (const auto& [dimension, terms] : selection.terms) {
        if (terms.empty()) continue;
        std::vector<Expr> alternatives;
        for (const NodeId& t : terms) alternatives.push_back(Expr::facet_pred(dimension, t.str()));
        conjuncts.push_back(alternatives.size() == 1 ? std::move(alternatives.front())
                                                     : Expr::any_of(std::move(alternatives)));
    }
    if (selection.text && !selection.text->empty()) {
        conjuncts.push_back(Expr::any_of({Expr::field_pred("title", CompareOp::Contains, *selection.text),
                                          Expr::field_pred("description", CompareOp::Contains, *selection.text)}));
    }
    Query q;
    q.target = NodeKind::Dataset;
    if (conjuncts.size() == 1) {
        q.where = std::move(conjuncts.front());
    } else if (!conjuncts.empty()) {
        q.where = Expr::all_of(std::move(conjuncts));
    }
    return q;
}

}  // namespace atlas
