#pragma once

// Structured graph-query language.
//
//   query     = "FIND" kind [ "WHERE" expr ] ;
//   kind      = "dataset" | "publication" | "tool" | "organization" ;
//   expr      = andExpr { "OR" andExpr } ;
//   andExpr   = unary { "AND" unary } ;
//   unary     = "NOT" unary | "(" expr ")" | pred ;
//   pred      = facetPred | edgePred | fieldPred ;
//   facetPred = dim "<=" STRING ;
//   dim       = "domain" | "lifecycle" | "datatype" | "format" ;
//   edgePred  = EDGEKIND ( "ANY" | STRING ) ;
//   fieldPred = IDENT ( "=" | "!=" | "~" ) STRING ;
//
// Keywords and kind/dimension/edge names are case-insensitive. A facet
// STRING is a term id or an exact (case-insensitive) term label.

#include <atlas/search.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace atlas {

enum class ExprKind { And, Or, Not, Field, Facet, Edge };
enum class CompareOp { Eq, Ne, Contains };

struct Expr {
    ExprKind kind = ExprKind::And;
    std::vector<Expr> children;  // And/Or: two or more; Not: exactly one

    // Field
    std::string field;
    CompareOp op = CompareOp::Eq;
    std::string value;

    // Facet
    Dimension dimension = Dimension::Domain;
    std::string term;  // id once resolved

    // Edge
    EdgeKind edge = EdgeKind::ClassifiedAs;
    std::optional<std::string> target;  // nullopt = ANY

    bool operator==(const Expr&) const = default;

    static Expr all_of(std::vector<Expr> children);
    static Expr any_of(std::vector<Expr> children);
    static Expr negate(Expr operand);
    static Expr field_pred(std::string field, CompareOp op, std::string value);
    static Expr facet_pred(Dimension dimension, std::string term);
    static Expr edge_pred(EdgeKind edge, std::optional<std::string> target);
};

struct Query {
    NodeKind target = NodeKind::Dataset;
    std::optional<Expr> where;  // nullopt matches every node of `target`

    bool operator==(const Query&) const = default;
};

class QuerySyntaxError : public Error {
public:
    QuerySyntaxError(const std::string& message, SourcePosition position, std::vector<std::string> expected,
                     std::string found);
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::vector<std::string> expected_;
    std::string found_;
};

/// Record fields a FieldPred may name for each target kind.
const std::vector<std::string>& queryable_fields(NodeKind kind);

/// Throws QuerySyntaxError, or Error{UnknownField | UnknownEdgeKind} with a position.
Query parse_query(std::string_view text);

/// Canonical text form; parse_query(to_string(q)) == q.
std::string to_string(const Query& query);

/// Replaces facet labels with term ids. Throws UnknownTerm, WrongDimension, AmbiguousLabel.
Query resolve_query(const Query& query, const Taxonomy& taxonomy);

/// Resolves, then evaluates with set semantics over all nodes of the target kind.
ResultSet evaluate_query(const Catalog& catalog, const Query& query);

/// Conjunction over dimensions of disjunctions of facet predicates, plus a
/// title/description substring test for the free text.
Query selection_to_query(const FacetSelection& selection);

}  // namespace atlas
