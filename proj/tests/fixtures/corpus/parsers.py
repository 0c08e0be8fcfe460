"""Minimal recursive-descent helpers for line-oriented formats."""


class ParseError(Exception):
    def __init__(self, message, line_no):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class Cursor:
    def __init__(self, lines):
        self.lines = list(lines)
        self.index = 0

    def peek(self):
        if self.index >= len(self.lines):
            return None
        return self.lines[self.index]

    def advance(self):
        line = self.peek()
        self.index += 1
        return line

    def expect_prefix(self, prefix):
        line = self.peek()
        if line is None or not line.startswith(prefix):
            raise ParseError(f"expected {prefix!r}", self.index + 1)
        return self.advance()[len(prefix):]


def parse_key_value(line, separator="="):
    key, sep, value = line.partition(separator)
    if not sep:
        return None
    return key.strip(), value.strip()


def parse_section(cursor, header):
    """Parse ``[header]`` followed by key=value lines."""
    cursor.expect_prefix("[" + header + "]")
    values = {}
    while True:
        line = cursor.peek()
        if line is None or line.startswith("["):
            break
        cursor.advance()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        pair = parse_key_value(line)
        if pair is None:
            raise ParseError("expected key=value", cursor.index)
        values[pair[0]] = pair[1]
    return values


def parse_document(text, known_sections):
    cursor = Cursor(text.splitlines())
    document = {}
    while cursor.peek() is not None:
        line = cursor.peek()
        if not line.strip():
            cursor.advance()
            continue
        name = line.strip().strip("[]")
        if name not in known_sections:
            raise ParseError(f"unknown section {name!r}", cursor.index + 1)
        document[name] = parse_section(cursor, name)
    return document
