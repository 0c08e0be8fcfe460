#!/usr/bin/env python3
"""Reference parser and template oracle for the fixture corpus.

Produces two frozen golden files under tests/fixtures/golden/:

  reference_units.json  -- per-file unit inventory from Python's own ast
                           (names, kinds, args, signatures, decorators,
                           docstrings, return expressions, line spans)
  golden_docs.json      -- byte-exact embedding-document expectations for the
                           first 20 function/method units, built by a
                           standalone template instantiation independent of
                           the production renderer

Run from the repository root:  python3 scripts/make_goldens.py
"""

import ast
import io
import json
import os
import sys
import tokenize

CORPUS = os.path.join("tests", "fixtures", "corpus")
GOLDEN = os.path.join("tests", "fixtures", "golden")


def signature_text(source_lines, tokens, start):
    """Verbatim header slice from the def/class/async keyword through the
    colon that opens the body, bracket-depth aware."""
    depth = 0
    begun = False
    sig_start = None
    for tok in tokens:
        if not begun:
            if tok.start[0] == start[0] and tok.start[1] == start[1]:
                begun = True
                sig_start = tok.start
            else:
                continue
        if tok.type == tokenize.OP:
            if tok.string in "([{":
                depth += 1
            elif tok.string in ")]}":
                depth -= 1
            elif tok.string == ":" and depth == 0:
                return slice_coords(source_lines, sig_start, tok.end)
    raise AssertionError("no header colon found at %r" % (start,))


def slice_coords(source_lines, start, end):
    (sl, sc), (el, ec) = start, end
    if sl == el:
        return source_lines[sl - 1][sc:ec]
    parts = [source_lines[sl - 1][sc:]]
    parts.extend(source_lines[i] for i in range(sl, el - 1))
    parts.append(source_lines[el - 1][:ec])
    return "\n".join(parts)


def node_segment(source_lines, node):
    return slice_coords(
        source_lines,
        (node.lineno, node.col_offset),
        (node.end_lineno, node.end_col_offset),
    )


def arg_names(arguments):
    names = []
    for a in arguments.posonlyargs:
        names.append(a.arg)
    for a in arguments.args:
        names.append(a.arg)
    if arguments.vararg:
        names.append("*" + arguments.vararg.arg)
    for a in arguments.kwonlyargs:
        names.append(a.arg)
    if arguments.kwarg:
        names.append("**" + arguments.kwarg.arg)
    return names


def collect_returns(node, source_lines):
    """Return-expression texts belonging to this unit (nested defs keep
    their own). A bare return contributes the literal token None. The text
    is the source slice from just after the return keyword to the end of
    the statement, stripped."""
    collected = []

    def visit(n):
        for child in ast.iter_child_nodes(n):
            if isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef, ast.Lambda)):
                continue
            if isinstance(child, ast.Return):
                if child.value is None:
                    collected.append("None")
                else:
                    text = slice_coords(
                        source_lines,
                        (child.lineno, child.col_offset + len("return")),
                        (child.end_lineno, child.end_col_offset),
                    )
                    collected.append(text.strip())
                continue
            visit(child)

    for stmt in node.body:
        if isinstance(stmt, ast.Return):
            if stmt.value is None:
                collected.append("None")
            else:
                text = slice_coords(
                    source_lines,
                    (stmt.lineno, stmt.col_offset + len("return")),
                    (stmt.end_lineno, stmt.end_col_offset),
                )
                collected.append(text.strip())
        elif not isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
            visit(stmt)
    return collected


def docstring_verbatim(node, source_lines):
    if not node.body:
        return None
    first = node.body[0]
    if isinstance(first, ast.Expr) and isinstance(first.value, ast.Constant) \
            and isinstance(first.value.value, str):
        return node_segment(source_lines, first.value)
    if isinstance(first, ast.Expr) and isinstance(first.value, ast.JoinedStr):
        return None  # f-strings are not docstrings
    return None


def decorator_texts(node, source_lines):
    return ["@" + node_segment(source_lines, dec) for dec in node.decorator_list]


def unit_from_def(node, source_lines, tokens, parent_class=None):
    kind = "method" if parent_class else "function"
    span_start = node.decorator_list[0].lineno if node.decorator_list else node.lineno
    return {
        "kind": kind,
        "name": node.name,
        "qualified_name": (parent_class + "." + node.name) if parent_class else node.name,
        "parent_class": parent_class,
        "args": arg_names(node.args),
        "signature": signature_text(source_lines, tokens, (node.lineno, node.col_offset)),
        "decorators": decorator_texts(node, source_lines),
        "docstring": docstring_verbatim(node, source_lines),
        "return_statements": collect_returns(node, source_lines),
        "span": [span_start, node.end_lineno],
    }


def unit_from_class(node, source_lines, tokens):
    span_start = node.decorator_list[0].lineno if node.decorator_list else node.lineno
    return {
        "kind": "class",
        "name": node.name,
        "qualified_name": node.name,
        "parent_class": None,
        "args": [],
        "signature": signature_text(source_lines, tokens, (node.lineno, node.col_offset)),
        "decorators": decorator_texts(node, source_lines),
        "docstring": docstring_verbatim(node, source_lines),
        "return_statements": [],
        "span": [span_start, node.end_lineno],
    }


def parse_reference(path, source):
    tree = ast.parse(source)
    source_lines = source.splitlines()
    tokens = list(tokenize.generate_tokens(io.StringIO(source).readline))
    units = []
    for stmt in tree.body:
        if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef)):
            units.append(unit_from_def(stmt, source_lines, tokens))
        elif isinstance(stmt, ast.ClassDef):
            units.append(unit_from_class(stmt, source_lines, tokens))
            for member in stmt.body:
                if isinstance(member, (ast.FunctionDef, ast.AsyncFunctionDef)):
                    units.append(unit_from_def(member, source_lines, tokens,
                                               parent_class=stmt.name))
    return {"path": path, "units": units}


# --- standalone template oracle -------------------------------------------

def quote_single(text):
    out = "'"
    for ch in text:
        if ch in ("\\", "'"):
            out += "\\"
        out += ch
    return out + "'"


def render_list(items):
    return "[" + ", ".join(quote_single(i) for i in items) + "]"


def render_document(unit):
    args = render_list(unit["args"])
    docstring = unit["docstring"] if unit["docstring"] is not None else "None"
    decorators = render_list(unit["decorators"]) if unit["decorators"] else "None"
    returns = "; ".join(unit["return_statements"]) if unit["return_statements"] else "None"
    return (
        "Method " + unit["name"]
        + " with arguments " + args
        + " have signature as " + unit["signature"]
        + " is described using " + docstring
        + " also have " + decorators
        + " as decorators and return statement described as " + returns
        + "."
    )


def main():
    files = sorted(f for f in os.listdir(CORPUS) if f.endswith(".py"))
    if not files:
        sys.exit("no corpus files found; run from the repository root")

    reference = []
    documents = []
    for name in files:
        with open(os.path.join(CORPUS, name), "r", encoding="utf-8") as handle:
            source = handle.read()
        entry = parse_reference(name, source)
        reference.append(entry)
        for unit in entry["units"]:
            if unit["kind"] in ("function", "method") and len(documents) < 20:
                documents.append({
                    "file_name": name,
                    "qualified_name": unit["qualified_name"],
                    "start_line": unit["span"][0],
                    "parent_class": unit["parent_class"],
                    "document": render_document(unit),
                })

    os.makedirs(GOLDEN, exist_ok=True)
    with open(os.path.join(GOLDEN, "reference_units.json"), "w", encoding="utf-8") as out:
        json.dump(reference, out, indent=1, sort_keys=True)
        out.write("\n")
    with open(os.path.join(GOLDEN, "golden_docs.json"), "w", encoding="utf-8") as out:
        json.dump(documents, out, indent=1, sort_keys=True)
        out.write("\n")

    total_units = sum(len(e["units"]) for e in reference)
    print(f"wrote goldens for {len(files)} files, {total_units} units, "
          f"{len(documents)} documents")


if __name__ == "__main__":
    main()
