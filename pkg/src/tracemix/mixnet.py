"""The traceable mixnet: key generation, sender encryption, mixing and batched tracing.

Senders publish a Paillier encryption of their value next to a Pedersen
commitment, a proof that they can open it, a Paillier encryption of the
commitment randomness, and per-server encryptions of additive shares of
(v, r).  Mixing is an ordinary re-encryption mix over the Paillier
ciphertexts followed by threshold decryption.  Tracing queries run one of the
distributed membership protocols twice, once against the requested set and
once against its complement, and abort when some index is proven in neither
run.
"""

from dataclasses import dataclass

from .algebra import Q
from .algebra.encoding import DecodeError
from .commitments import commit, prove_opening, verify_opening, Opening, OpeningProof
from .harness.bus import ProtocolError
from .instrument import NullTimer
from .sharing import share_mm
from .threshold.elgamal import eg_keygen
from .threshold.paillier import (PaiScheme, PaillierPublicKey, pai_keygen_dealer, pai_enc, pai_partial_decrypt,
                                 pai_combine, ciphertext_to_bytes)
from .threshold.pke import PKECiphertext, PKEDecryptError, pke_keygen, pke_enc, pke_dec
from .threshold.shuffle import shuffle
from .setmembership.common import Env, ServerInput, SenderProofError, QuerierCheckError
from .setmembership.dbsm import db_sm
from .setmembership.dbrsm import db_rsm

TRACE_IN = "trace_in"
TRACE_OUT = "trace_out"
DEFAULT_PAILLIER_BITS = 2048


@dataclass(frozen=True)
class MixnetPublicKey:
    share_pks: tuple
    pk_G: object
    pk_Z: PaillierPublicKey

    @property
    def m(self):
        return len(self.share_pks)

    def write(self, w):
        w.u32(len(self.share_pks))
        for pk in self.share_pks:
            w.element(pk)
        w.element(self.pk_G).raw(self.pk_Z.to_bytes())

    @classmethod
    def read(cls, r):
        m = r.u32()
        share_pks = tuple(r.element() for _ in range(m))
        return cls(share_pks, r.element(), PaillierPublicKey.read(r))


@dataclass(frozen=True)
class MixServerSecret:
    k: int
    sk_share: int
    sk_G: int
    sk_Z: int


@dataclass(frozen=True)
class SenderCiphertext:
    eps: int
    gamma: object
    ev: tuple
    er: tuple
    rho_gamma: OpeningProof
    eps_r: int

    def write(self, w, pk_Z):
        w.blob(ciphertext_to_bytes(pk_Z, self.eps)).element(self.gamma).u32(len(self.ev))
        for ev, er in zip(self.ev, self.er):
            w.raw(ev.to_bytes()).raw(er.to_bytes())
        w.raw(self.rho_gamma.to_bytes()).blob(ciphertext_to_bytes(pk_Z, self.eps_r))

    @classmethod
    def read(cls, r):
        eps = int.from_bytes(r.blob(), "big")
        gamma = r.element()
        m = r.u32()
        if m > 64:
            raise DecodeError("implausible number of share ciphertexts", r.offset - 4)
        ev, er = [], []
        for _ in range(m):
            ev.append(PKECiphertext.read(r))
            er.append(PKECiphertext.read(r))
        rho = OpeningProof.read(r)
        return cls(eps, gamma, tuple(ev), tuple(er), rho, int.from_bytes(r.blob(), "big"))


@dataclass
class MixWitness:
    perm: list
    v_shares: list
    r_shares: list


@dataclass
class QueryResult:
    kind: str
    I: frozenset
    J: frozenset
    main: object = None
    complement: object = None
    aborted: bool = False
    reason: str = ""

    @property
    def target(self):
        return self.I if self.kind == TRACE_IN else self.J

    @property
    def accepted(self):
        """I* for trace_in, J* for trace_out; None after an abort."""
        if self.aborted or self.main is None:
            return None
        return self.main.accepted

    @property
    def missing(self):
        if self.main is None or self.complement is None:
            return frozenset()
        return self.target - (self.main.accepted | self.complement.accepted)


def keygen(params, server_rngs, dealer_rng, paillier_bits=DEFAULT_PAILLIER_BITS):
    """Share-channel keys and ElGamal shares from each server; Paillier from a dealer."""
    m = len(server_rngs)
    pke = [pke_keygen(params, rng.fork("pke")) for rng in server_rngs]
    eg = eg_keygen(params, m, [rng.fork("elgamal") for rng in server_rngs])
    pai = pai_keygen_dealer(paillier_bits, m, dealer_rng)
    mpk = MixnetPublicKey(tuple(pk for pk, _ in pke), eg.pk, pai.pk)
    secrets = [MixServerSecret(k, pke[k][1], eg.shares[k], pai.shares[k]) for k in range(m)]
    return mpk, secrets


def enc(params, mpk, v, rng):
    if not 0 <= v < Q:
        raise ValueError("sender value must lie in Z_q")
    eps = pai_enc(mpk.pk_Z, v, rng)
    r = rng.scalar()
    gamma = commit(params, v, r)
    rho = prove_opening(params, gamma, Opening(v, r), rng)
    eps_r = pai_enc(mpk.pk_Z, r, rng)
    m = mpk.m
    vs, rs = share_mm(v, m, rng), share_mm(r, m, rng)
    ev = tuple(pke_enc(params, mpk.share_pks[k], vs[k], rng) for k in range(m))
    er = tuple(pke_enc(params, mpk.share_pks[k], rs[k], rng) for k in range(m))
    return SenderCiphertext(eps, gamma, ev, er, rho, eps_r)


def check_sender_proofs(params, ciphertexts):
    for i, c in enumerate(ciphertexts):
        if not verify_opening(params, c.gamma, c.rho_gamma):
            raise SenderProofError(i)


def mix(params, mpk, ciphertexts, secrets, server_rngs, bus=None, timer=None):
    """Returns (v', per-server MixWitness)."""
    timer = timer or NullTimer()
    n, m = len(ciphertexts), len(secrets)
    if n == 0:
        raise ValueError("nothing to mix")
    if len(server_rngs) != m or mpk.m != m:
        raise ValueError("one rng and one secret per server")
    check_sender_proofs(params, ciphertexts)
    perms = [rng.fork("mix-perm").permutation(n) for rng in server_rngs]
    with timer.phase("mix", "server"):
        (mixed,) = shuffle([PaiScheme(mpk.pk_Z)], [[c.eps for c in ciphertexts]], perms,
                           [rng.fork("mix-renc") for rng in server_rngs], bus=bus, phase="mix.shuffle")
        v_prime = []
        for j, ct in enumerate(mixed):
            parts = {s.k: pai_partial_decrypt(mpk.pk_Z, ct, s.sk_Z) for s in secrets}
            v = pai_combine(mpk.pk_Z, parts, m)
            if v >= Q:
                raise ProtocolError(f"mixed output {j} decrypts outside Z_q")
            v_prime.append(v)
    witnesses = []
    for s in secrets:
        try:
            vs = [pke_dec(s.sk_share, c.ev[s.k]) for c in ciphertexts]
            rs = [pke_dec(s.sk_share, c.er[s.k]) for c in ciphertexts]
        except (PKEDecryptError, IndexError) as exc:
            raise ProtocolError(f"server {s.k} cannot decrypt its shares: {exc}") from exc
        witnesses.append(MixWitness(perms[s.k], vs, rs))
    return v_prime, witnesses


def _server_inputs(secrets, witnesses, server_rngs, label):
    return [ServerInput(s.k, s.sk_G, w.perm, w.v_shares, w.r_shares, rng.fork(label), s.sk_Z)
            for s, w, rng in zip(secrets, witnesses, server_rngs)]


def _run_env(env, label):
    return Env(env.context + b"/" + label.encode(), env.bus, env.timer, env.hooks.for_run(label), env.whitebox)


def _finish(result):
    missing = result.missing
    if missing:
        result.aborted = True
        result.reason = f"indices {sorted(missing)} were proven in neither run"
    return result


def btrace_in(params, mpk, ciphertexts, v_prime, I, J, secrets, witnesses, server_rngs, querier_rng, env=None):
    env = env or Env()
    n = len(ciphertexts)
    I, J = frozenset(I), frozenset(J)
    result = QueryResult(TRACE_IN, I, J)
    gammas = [c.gamma for c in ciphertexts]
    try:
        for label, J_run in (("main", J), ("complement", frozenset(range(n)) - J)):
            run = db_sm(params, mpk.pk_G, gammas, v_prime, I, J_run,
                        _server_inputs(secrets, witnesses, server_rngs, label),
                        querier_rng.fork(label), _run_env(env, label))
            setattr(result, label, run)
    except QuerierCheckError as exc:
        result.aborted, result.reason = True, str(exc)
        return result
    return _finish(result)


def btrace_out(params, mpk, ciphertexts, v_prime, I, J, secrets, witnesses, server_rngs, querier_rng, env=None,
               dealer_rng=None):
    env = env or Env()
    n = len(ciphertexts)
    I, J = frozenset(I), frozenset(J)
    result = QueryResult(TRACE_OUT, I, J)
    gammas = [c.gamma for c in ciphertexts]
    rhos = [c.rho_gamma for c in ciphertexts]
    eps_r = [c.eps_r for c in ciphertexts]
    try:
        for label, I_run in (("main", I), ("complement", frozenset(range(n)) - I)):
            run = db_rsm(params, mpk.pk_G, mpk.pk_Z, gammas, rhos, eps_r, v_prime, I_run, J,
                         _server_inputs(secrets, witnesses, server_rngs, label),
                         querier_rng.fork(label), _run_env(env, label),
                         dealer_rng=dealer_rng.fork(label) if dealer_rng is not None else None)
            setattr(result, label, run)
    except (QuerierCheckError, SenderProofError) as exc:
        result.aborted, result.reason = True, str(exc)
        return result
    return _finish(result)


__all__ = [
    "MixnetPublicKey", "MixServerSecret", "SenderCiphertext", "MixWitness", "QueryResult",
    "keygen", "enc", "mix", "btrace_in", "btrace_out", "check_sender_proofs", "TRACE_IN", "TRACE_OUT",
    "DEFAULT_PAILLIER_BITS",
]
