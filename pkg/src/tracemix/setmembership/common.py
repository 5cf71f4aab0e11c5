"""Inputs and errors shared by the distributed membership protocols."""

from dataclasses import dataclass, field

from ..instrument import NullTimer, NO_HOOKS
from ..harness.bus import Bus


class QuerierCheckError(RuntimeError):
    """The querier's published (quasi-)signatures or encryptions failed the servers' checks."""


class SenderProofError(RuntimeError):
    """A sender's proof of knowledge of its commitment opening did not verify."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"opening proof of ciphertext {index} does not verify")


@dataclass
class ServerInput:
    """What mix-server k brings to a query: key shares, its permutation and its shares of (v, r)."""

    k: int
    sk_G: int
    perm: list
    v_shares: list
    r_shares: list
    rng: object
    sk_Z: int = None


@dataclass
class Env:
    """Per-run plumbing: transcript context, bus, timer and hooks."""

    context: bytes = b""
    bus: Bus = None
    timer: object = field(default_factory=NullTimer)
    hooks: object = NO_HOOKS
    whitebox: bool = False

    def __post_init__(self):
        if self.bus is None:
            self.bus = Bus(keep_log=False)


def server_name(k):
    return f"server{k}"


QUERIER = "querier"


def index_context(context, index):
    return context + b"/" + index.to_bytes(4, "big")
