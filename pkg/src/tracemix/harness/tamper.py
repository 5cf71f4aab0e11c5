"""Fault injection for soundness experiments.

A directive names a server, a protocol point and an index, for example
``server=1,phase=sm.dpk.z,index=auto``.  ``index=auto`` resolves per query
to the smallest index the oracle says should be accepted in the main run,
which is the index whose suppression the complement rerun must catch.

Optional keys: ``run`` (main, complement or both; default main), ``query``
(0-based query number; default every query of the matching kind) and
``slot`` (witness slot for the ``*.dpk.witness`` and ``*.dpk.z`` phases).
"""

from dataclasses import dataclass

from ..algebra import Q
from ..instrument import Hooks

# phase -> (query kind, what it does)
PHASES = {
    "sm.dpk.witness": ("trace_in", "add 1 to one witness share before the proof"),
    "sm.dpk.z": ("trace_in", "add 1 to one response share sent to the querier"),
    "sm.dpk.statement": ("trace_in", "provers prove against gamma*g1 instead of gamma"),
    "sm.sigma.fake": ("trace_in", "blinding contribution encrypts g1^b, discarding the real signature"),
    "sm.shuffle.perm": ("trace_in", "swap two entries of the server's inverse permutation"),
    "sm.blind.b": ("trace_in", "blind with b+1 but prove with b"),
    "rsm.dpk.witness": ("trace_out", "add 1 to one witness share before the proof"),
    "rsm.dpk.z": ("trace_out", "add 1 to one response share sent to the querier"),
    "rsm.dpk.statement": ("trace_out", "provers prove against v'+1"),
    "rsm.S.fake": ("trace_out", "replace the shuffled S ciphertext by an encryption of the identity"),
    "rsm.shuffle.perm": ("trace_out", "swap two entries of the server's permutation"),
    "rsm.blind.bc": ("trace_out", "blind c with bc+1 but prove with bc"),
    "rsm.mult.delta1": ("trace_out", "add 1 to the server's share of bS*bc"),
}
RUNS = ("main", "complement", "both")


@dataclass(frozen=True)
class TamperDirective:
    server: int
    phase: str
    index: object = "auto"  # int or "auto"
    run: str = "main"
    query: int = None
    slot: int = 0

    @property
    def kind(self):
        return PHASES[self.phase][0]

    def __str__(self):
        parts = [f"server={self.server}", f"phase={self.phase}", f"index={self.index}", f"run={self.run}"]
        if self.query is not None:
            parts.append(f"query={self.query}")
        if self.slot:
            parts.append(f"slot={self.slot}")
        return ",".join(parts)


def parse_directive(text, m=None):
    fields = {}
    for item in text.replace(" ", "").split(","):
        if not item:
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"tamper field {item!r} is not key=value")
        fields[key] = value
    unknown = set(fields) - {"server", "phase", "index", "run", "query", "slot"}
    if unknown:
        raise ValueError(f"unknown tamper fields {sorted(unknown)}")
    if "server" not in fields or "phase" not in fields:
        raise ValueError("tamper directive needs server= and phase=")
    phase = fields["phase"]
    if phase not in PHASES:
        raise ValueError(f"unknown tamper phase {phase!r}; known: {', '.join(sorted(PHASES))}")
    server = int(fields["server"])
    if server < 0 or (m is not None and server >= m):
        raise ValueError(f"tamper server {server} does not exist")
    index = fields.get("index", "auto")
    index = index if index == "auto" else int(index)
    run = fields.get("run", "main")
    if run not in RUNS:
        raise ValueError(f"tamper run must be one of {RUNS}")
    query = int(fields["query"]) if "query" in fields else None
    return TamperDirective(server, phase, index, run, query, int(fields.get("slot", 0)))


class TamperHooks(Hooks):
    """Active directives for one query, each with a concrete index."""

    def __init__(self, active, run=None):
        self.active = list(active)  # (directive, index)
        self.run = run

    @classmethod
    def for_query(cls, directives, query_no, kind, expected):
        """``expected`` is the oracle's accepted set for the main run."""
        active = []
        for d in directives:
            if d.kind != kind or (d.query is not None and d.query != query_no):
                continue
            if d.index == "auto":
                if not expected:
                    continue
                active.append((d, min(expected)))
            else:
                active.append((d, d.index))
        return cls(active)

    def for_run(self, label):
        return TamperHooks([(d, i) for d, i in self.active if d.run in (label, "both")], label)

    def _match(self, phase, server, index):
        for d, i in self.active:
            if d.phase == phase and i == index and (server is None or d.server == server):
                yield d

    def fires(self, phase, server, index):
        return any(True for _ in self._match(phase, server, index))

    def perturb(self, phase, server, index, value):
        for d in self._match(phase, server, index):
            if isinstance(value, (list, tuple)):
                out = list(value)
                out[d.slot] = (out[d.slot] + 1) % Q
                value = type(value)(out)
            else:
                value = (value + 1) % Q
        return value
