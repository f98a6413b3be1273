"""Run configuration: a sectioned key = value format.

    # comment
    [setup]
    kind = hypertoric
    M = [[1, 1]]
    theta = [1]
    c = [1/3]

    [truncation]
    max_degree = 8
    weights = auto
    jobs = 1

    [output]
    format = json

Values are integers, rationals ``p/q``, bare words, or bracketed lists
(nested for matrices; commas or whitespace separate entries).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

ALLOWED = {
    "setup": {"kind", "M", "theta", "c", "dynkin", "base", "n", "vertices", "arrows",
              "dimension", "distinguished", "extended_vertex", "name"},
    "truncation": {"max_degree", "weights", "jobs"},
    "output": {"format", "path"},
}
KINDS = ("hypertoric", "preprojective", "calogero-moser", "quiver")

_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(,)|([-+]?\d+/[-+]?\d+)|([-+]?\d+)|([A-Za-z_][\w.\-]*))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass
class RunConfig:
    setup: dict
    max_degree: int = 4
    weights: object = "auto"  # "auto" or a list of integer tuples
    jobs: int = 1
    output_format: str = "text"
    output_path: str | None = None
    positions: dict = field(default_factory=dict, repr=False)


def parse_value(text: str, line: int = 0, col0: int = 1):
    pos = 0
    stack: list[list] = [[]]
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col0 + pos)
        here = col0 + m.start(m.lastindex)
        lb, rb, comma, rat, integer, word = m.groups()
        if lb:
            stack.append([])
        elif rb:
            if len(stack) == 1:
                raise ParseError("unbalanced ']'", line, here)
            done = stack.pop()
            stack[-1].append(done)
        elif comma:
            pass
        elif rat:
            p, q = rat.split("/")
            if int(q) == 0:
                raise ParseError(f"zero denominator in {rat!r}", line, here)
            stack[-1].append(Fraction(int(p), int(q)))
        elif integer:
            stack[-1].append(int(integer))
        else:
            stack[-1].append(word)
        pos = m.end()
    if len(stack) != 1:
        raise ParseError("unbalanced '['", line, col0 + len(text))
    if len(stack[0]) != 1:
        raise ParseError("expected exactly one value", line, col0)
    return stack[0][0]


def parse_config_text(text: str) -> RunConfig:
    sections: dict = {name: {} for name in ALLOWED}
    positions: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            m = re.fullmatch(r"\[([a-z]+)\]", stripped)
            if not m or m.group(1) not in ALLOWED:
                raise ParseError(f"unknown section {stripped!r}", lineno, col)
            current = m.group(1)
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, col)
        if current is None:
            raise ParseError("key outside of a section", lineno, col)
        key, _, rest = line.partition("=")
        key = key.strip()
        if key not in ALLOWED[current]:
            raise ParseError(f"unknown key {key!r} in [{current}]", lineno, col)
        if key in sections[current]:
            raise ParseError(f"duplicate key {key!r}", lineno, col)
        vcol = line.index("=") + 2
        sections[current][key] = parse_value(rest, lineno, vcol)
        positions[(current, key)] = (lineno, col)
    setup = sections["setup"]
    if "kind" not in setup:
        raise ParseError("[setup] needs a 'kind'", 0, 0)
    if setup["kind"] not in KINDS:
        line, col = positions[("setup", "kind")]
        raise ParseError(f"kind must be one of {', '.join(KINDS)}", line, col)
    trunc, out = sections["truncation"], sections["output"]
    cfg = RunConfig(setup=setup, positions=positions)
    if "max_degree" in trunc:
        cfg.max_degree = _expect_int(trunc["max_degree"], positions[("truncation", "max_degree")])
    if "jobs" in trunc:
        cfg.jobs = _expect_int(trunc["jobs"], positions[("truncation", "jobs")])
    if "weights" in trunc:
        cfg.weights = normalize_weights(trunc["weights"], positions[("truncation", "weights")])
    if "format" in out:
        if out["format"] not in ("text", "json"):
            raise ParseError("format must be text or json", *positions[("output", "format")])
        cfg.output_format = out["format"]
    if "path" in out:
        cfg.output_path = str(out["path"])
    return cfg


def _expect_int(value, pos) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError("expected an integer", *pos)
    return value


def normalize_weights(value, pos=(0, 0)):
    if value == "auto":
        return "auto"
    if not isinstance(value, list):
        raise ParseError("weights must be 'auto' or a list", *pos)
    out = []
    for w in value:
        vec = w if isinstance(w, list) else [w]
        if not all(isinstance(x, int) for x in vec):
            raise ParseError("weights must be integer vectors", *pos)
        out.append(tuple(vec))
    return out


def parse_weights_flag(text: str):
    """``auto`` or ``0;1;-1`` (sectors) with commas inside each sector: ``0,0;1,-1``."""
    if text.strip() == "auto":
        return "auto"
    try:
        return [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError as exc:
        raise ParseError(f"bad weight list {text!r}") from exc


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_config_text(text)
