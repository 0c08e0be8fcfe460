#include "repofix/indexer/python_parser.hpp"

#include <tree_sitter/api.h>

#include <cstring>
#include <memory>

extern "C" const TSLanguage* tree_sitter_python();

namespace repofix::indexer {

namespace {

struct ParserDeleter {
    void operator()(TSParser* p) const { ts_parser_delete(p); }
};
struct TreeDeleter {
    void operator()(TSTree* t) const { ts_tree_delete(t); }
};

using ParserPtr = std::unique_ptr<TSParser, ParserDeleter>;
using TreePtr = std::unique_ptr<TSTree, TreeDeleter>;

std::string_view node_text(TSNode n, std::string_view src) {
    uint32_t a = ts_node_start_byte(n);
    uint32_t b = ts_node_end_byte(n);
    if (a > b || b > src.size()) return {};
    return src.substr(a, b - a);
}

bool is_type(TSNode n, const char* type) {
    return std::strcmp(ts_node_type(n), type) == 0;
}

// End row (0-based) of the last non-comment token inside `n`. Trailing
// comments inside a block would otherwise stretch the span past the code.
int last_code_row(TSNode n) {
    if (is_type(n, "comment")) return -1;
    uint32_t count = ts_node_child_count(n);
    if (count == 0) return static_cast<int>(ts_node_end_point(n).row);
    int best = -1;
    for (uint32_t i = 0; i < count; ++i) {
        int row = last_code_row(ts_node_child(n, i));
        if (row > best) best = row;
    }
    if (best < 0) best = static_cast<int>(ts_node_end_point(n).row);
    return best;
}

// First syntax-error position in the tree, if any.
bool find_error(TSNode n, int* row) {
    if (ts_node_is_error(n) || ts_node_is_missing(n)) {
        *row = static_cast<int>(ts_node_start_point(n).row);
        return true;
    }
    if (!ts_node_has_error(n)) return false;
    uint32_t count = ts_node_child_count(n);
    for (uint32_t i = 0; i < count; ++i) {
        if (find_error(ts_node_child(n, i), row)) return true;
    }
    *row = static_cast<int>(ts_node_start_point(n).row);
    return true;
}

// Verbatim header text: from the def/class keyword through the colon that
// opens the body (annotations and multi-line parameter lists included).
std::string signature_text(TSNode def_node, std::string_view src) {
    TSNode body = ts_node_child_by_field_name(def_node, "body", 4);
    uint32_t body_start = ts_node_is_null(body) ? ts_node_end_byte(def_node)
                                                : ts_node_start_byte(body);
    uint32_t colon_end = 0;
    uint32_t count = ts_node_child_count(def_node);
    for (uint32_t i = 0; i < count; ++i) {
        TSNode c = ts_node_child(def_node, i);
        if (is_type(c, ":") && ts_node_end_byte(c) <= body_start)
            colon_end = ts_node_end_byte(c);
    }
    uint32_t start = ts_node_start_byte(def_node);
    if (colon_end <= start) colon_end = body_start;
    return std::string(src.substr(start, colon_end - start));
}

std::vector<Arg> extract_args(TSNode def_node, std::string_view src) {
    std::vector<Arg> args;
    TSNode params = ts_node_child_by_field_name(def_node, "parameters", 10);
    if (ts_node_is_null(params)) return args;
    uint32_t count = ts_node_named_child_count(params);
    for (uint32_t i = 0; i < count; ++i) {
        TSNode c = ts_node_named_child(params, i);
        const char* t = ts_node_type(c);
        Arg arg;
        if (std::strcmp(t, "identifier") == 0 ||
            std::strcmp(t, "list_splat_pattern") == 0 ||
            std::strcmp(t, "dictionary_splat_pattern") == 0 ||
            std::strcmp(t, "tuple_pattern") == 0) {
            arg.name = std::string(node_text(c, src));
        } else if (std::strcmp(t, "typed_parameter") == 0) {
            if (ts_node_named_child_count(c) > 0)
                arg.name = std::string(node_text(ts_node_named_child(c, 0), src));
            TSNode type = ts_node_child_by_field_name(c, "type", 4);
            if (!ts_node_is_null(type)) arg.annotation = std::string(node_text(type, src));
        } else if (std::strcmp(t, "default_parameter") == 0 ||
                   std::strcmp(t, "typed_default_parameter") == 0) {
            TSNode name = ts_node_child_by_field_name(c, "name", 4);
            TSNode type = ts_node_child_by_field_name(c, "type", 4);
            TSNode value = ts_node_child_by_field_name(c, "value", 5);
            if (!ts_node_is_null(name)) arg.name = std::string(node_text(name, src));
            if (!ts_node_is_null(type)) arg.annotation = std::string(node_text(type, src));
            if (!ts_node_is_null(value)) arg.default_value = std::string(node_text(value, src));
        } else {
            // keyword_separator '*' and positional_separator '/' are markers,
            // not parameters
            continue;
        }
        if (!arg.name.empty()) args.push_back(std::move(arg));
    }
    return args;
}

std::optional<std::string> extract_docstring(TSNode def_node, std::string_view src) {
    TSNode body = ts_node_child_by_field_name(def_node, "body", 4);
    if (ts_node_is_null(body)) return std::nullopt;
    uint32_t count = ts_node_named_child_count(body);
    for (uint32_t i = 0; i < count; ++i) {
        TSNode stmt = ts_node_named_child(body, i);
        if (is_type(stmt, "comment")) continue;
        if (!is_type(stmt, "expression_statement")) return std::nullopt;
        if (ts_node_named_child_count(stmt) != 1) return std::nullopt;
        TSNode expr = ts_node_named_child(stmt, 0);
        if (is_type(expr, "string") || is_type(expr, "concatenated_string"))
            return std::string(node_text(expr, src));
        return std::nullopt;
    }
    return std::nullopt;
}

// Return expressions belonging to this unit; nested defs keep their own.
void collect_returns(TSNode n, std::string_view src, std::vector<std::string>& out) {
    uint32_t count = ts_node_named_child_count(n);
    for (uint32_t i = 0; i < count; ++i) {
        TSNode c = ts_node_named_child(n, i);
        const char* t = ts_node_type(c);
        if (std::strcmp(t, "function_definition") == 0 ||
            std::strcmp(t, "class_definition") == 0 ||
            std::strcmp(t, "decorated_definition") == 0 ||
            std::strcmp(t, "lambda") == 0)
            continue;
        if (std::strcmp(t, "return_statement") == 0) {
            if (ts_node_named_child_count(c) > 0) {
                // slice from just past the `return` keyword to the end of
                // the statement, trimmed (parentheses stay verbatim)
                uint32_t a = ts_node_start_byte(c) + 6;
                uint32_t b = ts_node_end_byte(c);
                std::string text(src.substr(a, b - a));
                std::size_t begin = text.find_first_not_of(" \t\r\n");
                std::size_t end = text.find_last_not_of(" \t\r\n");
                out.push_back(begin == std::string::npos
                                  ? std::string{}
                                  : text.substr(begin, end - begin + 1));
            } else {
                out.emplace_back("None");
            }
            continue;
        }
        collect_returns(c, src, out);
    }
}

std::vector<std::string> extract_decorators(TSNode decorated, std::string_view src) {
    std::vector<std::string> decorators;
    uint32_t count = ts_node_named_child_count(decorated);
    for (uint32_t i = 0; i < count; ++i) {
        TSNode c = ts_node_named_child(decorated, i);
        if (is_type(c, "decorator")) decorators.emplace_back(node_text(c, src));
    }
    return decorators;
}

CodeUnit make_function_unit(TSNode def_node, TSNode span_node, std::string_view src,
                            std::vector<std::string> decorators,
                            const std::optional<std::string>& parent_class) {
    CodeUnit unit;
    unit.kind = parent_class ? UnitKind::Method : UnitKind::Function;
    TSNode name = ts_node_child_by_field_name(def_node, "name", 4);
    if (!ts_node_is_null(name)) unit.name = std::string(node_text(name, src));
    unit.qualified_name = parent_class ? *parent_class + "." + unit.name : unit.name;
    unit.args = extract_args(def_node, src);
    unit.signature = signature_text(def_node, src);
    unit.decorators = std::move(decorators);
    unit.docstring = extract_docstring(def_node, src);
    TSNode body = ts_node_child_by_field_name(def_node, "body", 4);
    if (!ts_node_is_null(body)) collect_returns(body, src, unit.return_statements);
    unit.start_line = static_cast<int>(ts_node_start_point(span_node).row) + 1;
    unit.end_line = last_code_row(def_node) + 1;
    unit.parent_class = parent_class;
    return unit;
}

CodeUnit make_class_unit(TSNode class_node, TSNode span_node, std::string_view src,
                         std::vector<std::string> decorators) {
    CodeUnit unit;
    unit.kind = UnitKind::Class;
    TSNode name = ts_node_child_by_field_name(class_node, "name", 4);
    if (!ts_node_is_null(name)) unit.name = std::string(node_text(name, src));
    unit.qualified_name = unit.name;
    unit.signature = signature_text(class_node, src);
    unit.decorators = std::move(decorators);
    unit.docstring = extract_docstring(class_node, src);
    unit.start_line = static_cast<int>(ts_node_start_point(span_node).row) + 1;
    unit.end_line = last_code_row(class_node) + 1;
    return unit;
}

// class_name by value: units may reallocate while members are appended.
void emit_class_members(TSNode class_node, std::string_view src, std::string class_name,
                        std::vector<CodeUnit>& units) {
    TSNode body = ts_node_child_by_field_name(class_node, "body", 4);
    if (ts_node_is_null(body)) return;
    uint32_t count = ts_node_named_child_count(body);
    for (uint32_t i = 0; i < count; ++i) {
        TSNode stmt = ts_node_named_child(body, i);
        if (is_type(stmt, "function_definition")) {
            units.push_back(make_function_unit(stmt, stmt, src, {}, class_name));
        } else if (is_type(stmt, "decorated_definition")) {
            TSNode def = ts_node_child_by_field_name(stmt, "definition", 10);
            if (!ts_node_is_null(def) && is_type(def, "function_definition"))
                units.push_back(
                    make_function_unit(def, stmt, src, extract_decorators(stmt, src), class_name));
            // decorated nested classes fold into the enclosing class span
        }
    }
}

}  // namespace

FileSchematic parse_file(const std::string& path, std::string_view source) {
    FileSchematic schematic;
    schematic.path = path;

    ParserPtr parser(ts_parser_new());
    ts_parser_set_language(parser.get(), tree_sitter_python());
    TreePtr tree(ts_parser_parse_string(parser.get(), nullptr, source.data(),
                                        static_cast<uint32_t>(source.size())));
    if (!tree) {
        schematic.parse_ok = false;
        schematic.parse_error = "parser returned no tree";
        return schematic;
    }
    TSNode root = ts_tree_root_node(tree.get());
    if (ts_node_has_error(root)) {
        int row = 0;
        find_error(root, &row);
        schematic.parse_ok = false;
        schematic.parse_error = "syntax error near line " + std::to_string(row + 1);
        return schematic;
    }

    uint32_t count = ts_node_named_child_count(root);
    for (uint32_t i = 0; i < count; ++i) {
        TSNode stmt = ts_node_named_child(root, i);
        if (is_type(stmt, "function_definition")) {
            schematic.units.push_back(make_function_unit(stmt, stmt, source, {}, std::nullopt));
        } else if (is_type(stmt, "class_definition")) {
            schematic.units.push_back(make_class_unit(stmt, stmt, source, {}));
            emit_class_members(stmt, source, schematic.units.back().name, schematic.units);
        } else if (is_type(stmt, "decorated_definition")) {
            TSNode def = ts_node_child_by_field_name(stmt, "definition", 10);
            if (ts_node_is_null(def)) continue;
            auto decorators = extract_decorators(stmt, source);
            if (is_type(def, "function_definition")) {
                schematic.units.push_back(
                    make_function_unit(def, stmt, source, std::move(decorators), std::nullopt));
            } else if (is_type(def, "class_definition")) {
                schematic.units.push_back(
                    make_class_unit(def, stmt, source, std::move(decorators)));
                emit_class_members(def, source, schematic.units.back().name, schematic.units);
            }
        }
    }
    return schematic;
}

bool parses_clean(std::string_view source, std::string* diagnostic) {
    ParserPtr parser(ts_parser_new());
    ts_parser_set_language(parser.get(), tree_sitter_python());
    TreePtr tree(ts_parser_parse_string(parser.get(), nullptr, source.data(),
                                        static_cast<uint32_t>(source.size())));
    if (!tree) {
        if (diagnostic) *diagnostic = "parser returned no tree";
        return false;
    }
    TSNode root = ts_tree_root_node(tree.get());
    if (!ts_node_has_error(root)) return true;
    if (diagnostic) {
        int row = 0;
        find_error(root, &row);
        *diagnostic = "syntax error near line " + std::to_string(row + 1);
    }
    return false;
}

}  // namespace repofix::indexer
