"""Session configuration files.

A plain key = value format, one setting per line, ``#`` starts a comment::

    n = 8
    m = 2
    seed = 7
    paillier_bits = 2048
    value_space = 4
    output = session.tmix
    query = trace_in I=all J=0-3
    query = trace_out I=0,2,5 J=all
    tamper = server=1,phase=sm.dpk.z,index=auto

``query`` and ``tamper`` may repeat.  Index sets are ``all``, ``none`` or a
comma list of indices and inclusive ranges.  ``value_space`` bounds the
senders' raw values before nonce padding; small spaces make duplicate votes
common, which the padding keeps distinct.
"""

from dataclasses import dataclass, field

from .tamper import parse_directive, TamperDirective

KINDS = ("trace_in", "trace_out")
_ALIASES = {"btrace_in": "trace_in", "btrace_out": "trace_out"}


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Query:
    kind: str
    I: frozenset
    J: frozenset

    def __str__(self):
        return f"{self.kind} I={format_index_set(self.I)} J={format_index_set(self.J)}"


@dataclass
class SessionConfig:
    n: int = 8
    m: int = 2
    seed: int = 0
    paillier_bits: int = 2048
    value_space: int = 1 << 32
    output: str = None
    queries: list = field(default_factory=list)
    tampers: list = field(default_factory=list)
    bench: bool = False

    def validate(self):
        if self.n < 1 or self.m < 1:
            raise ConfigError("n and m must be positive")
        if self.value_space < 1 or self.value_space.bit_length() > 180:
            raise ConfigError("value_space must lie in [1, 2^180)")
        if self.paillier_bits < 64 or self.paillier_bits % 2:
            raise ConfigError("paillier_bits must be an even number >= 64")
        universe = frozenset(range(self.n))
        for q in self.queries:
            if not (q.I <= universe and q.J <= universe):
                raise ConfigError(f"query {q} uses indices outside [0, {self.n})")
        for t in self.tampers:
            if not isinstance(t, TamperDirective):
                raise ConfigError("tamper entries must be parsed directives")
            if t.server >= self.m:
                raise ConfigError(f"tamper directive names server {t.server} but m = {self.m}")
            if t.query is not None and t.query >= len(self.queries):
                raise ConfigError(f"tamper directive names query {t.query} which does not exist")
            if t.index != "auto" and not 0 <= t.index < self.n:
                raise ConfigError(f"tamper index {t.index} outside [0, {self.n})")
        return self


def parse_index_set(text, n):
    text = text.strip()
    if text == "all":
        return frozenset(range(n))
    if text in ("none", ""):
        return frozenset()
    out = set()
    for part in text.split(","):
        lo, dash, hi = part.partition("-")
        if dash:
            a, b = int(lo), int(hi)
            if b < a:
                raise ValueError(f"empty range {part!r}")
            out.update(range(a, b + 1))
        else:
            out.add(int(lo))
    return frozenset(out)


def format_index_set(s):
    s = sorted(s)
    if not s:
        return "none"
    parts, start, prev = [], s[0], s[0]
    for x in s[1:] + [None]:
        if x is not None and x == prev + 1:
            prev = x
            continue
        parts.append(str(start) if start == prev else f"{start}-{prev}")
        if x is not None:
            start = prev = x
    return ",".join(parts)


def parse_query(text, n):
    words = text.split()
    if not words:
        raise ValueError("empty query")
    kind = _ALIASES.get(words[0], words[0])
    if kind not in KINDS:
        raise ValueError(f"query kind must be one of {KINDS}")
    sets = {"I": frozenset(), "J": frozenset()}
    for w in words[1:]:
        key, sep, value = w.partition("=")
        if not sep or key not in sets:
            raise ValueError(f"bad query field {w!r}")
        sets[key] = parse_index_set(value, n)
    return Query(kind, sets["I"], sets["J"])


_INT_KEYS = ("n", "m", "seed", "paillier_bits", "value_space")


def parse_config(text):
    cfg = SessionConfig()
    raw_queries, raw_tampers = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError("expected key = value", lineno)
        key, value = key.strip(), value.strip()
        try:
            if key in _INT_KEYS:
                setattr(cfg, key, int(value, 0))
            elif key == "output":
                cfg.output = value
            elif key == "bench":
                cfg.bench = value.lower() in ("1", "true", "yes", "on")
            elif key == "query":
                raw_queries.append((lineno, value))
            elif key == "tamper":
                raw_tampers.append((lineno, value))
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(str(exc), lineno) from None
    for lineno, value in raw_queries:
        try:
            cfg.queries.append(parse_query(value, cfg.n))
        except ValueError as exc:
            raise ConfigError(str(exc), lineno) from None
    for lineno, value in raw_tampers:
        try:
            cfg.tampers.append(parse_directive(value))
        except ValueError as exc:
            raise ConfigError(str(exc), lineno) from None
    return cfg.validate()


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
