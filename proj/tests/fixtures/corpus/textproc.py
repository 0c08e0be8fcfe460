"""Text utilities: tokenization, wrapping, normalization."""

import re
import unicodedata

_WORD_RE = re.compile(r"[A-Za-z0-9_]+")
_WS_RE = re.compile(r"\s+")


def tokenize(text):
    """Lowercased word tokens of ``text``."""
    return [m.group(0).lower() for m in _WORD_RE.finditer(text)]


def normalize_whitespace(text):
    return _WS_RE.sub(" ", text).strip()


def strip_accents(text):
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def wrap_lines(text, width=72):
    """Greedy line wrapping preserving existing paragraph breaks."""
    out = []
    for paragraph in text.split("\n\n"):
        words = paragraph.split()
        if not words:
            continue
        line = words[0]
        for word in words[1:]:
            if len(line) + 1 + len(word) <= width:
                line = line + " " + word
            else:
                out.append(line)
                line = word
        out.append(line)
    return out


async def stream_lines(reader, limit=None):
    """Async wrapper yielding decoded, stripped lines."""
    count = 0
    while True:
        raw = await reader.readline()
        if not raw:
            return
        yield raw.decode("utf-8").rstrip("\n")
        count += 1
        if limit is not None and count >= limit:
            return


def ngrams(tokens, n=2):
    if n <= 0:
        raise ValueError("n must be positive")
    return list(zip(*(tokens[i:] for i in range(n))))


def levenshtein(a, b):
    """Edit distance; classic two-row dynamic program."""
    if len(a) < len(b):
        return levenshtein(b, a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            insert_cost = current[j - 1] + 1
            delete_cost = previous[j] + 1
            replace_cost = previous[j - 1] + (ca != cb)
            current.append(min(insert_cost, delete_cost, replace_cost))
        previous = current
    return previous[-1]
