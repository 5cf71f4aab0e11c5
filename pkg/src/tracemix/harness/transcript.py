"""Binary session transcripts and their offline verification.

Layout: the magic ``TMIX``, a version byte, then tagged sections
``tag:u8 | length:u32 | body``.  Integers are big-endian; group elements use
the wire encoding (group id byte, then the compressed point).

====  ===========  ==================================================
tag   section      body
====  ===========  ==================================================
1     header       session id (16 bytes), n:u32, m:u32, queries:u32
2     params       setup seed and generators
3     mpk          share-channel keys, ElGamal key, Paillier key
4     ciphertexts  n sender ciphertexts
5     outputs      n mixed output scalars v'
6     query        one per query: number, kind, I, J, abort flag and
                   reason, then the main and complement run records
255   end          empty
====  ===========  ==================================================

Verification re-derives the parameters, checks every sender's opening
proof, re-verifies every recorded signature and distributed proof, checks
that recorded verdicts and accepted sets match, and applies the complement
abort rule.  A session that aborted is rejected with the indices at fault.
"""

from dataclasses import dataclass

from ..algebra.encoding import Writer, Reader, DecodeError
from ..commitments import verify_opening
from ..mixnet import MixnetPublicKey, SenderCiphertext, TRACE_IN, TRACE_OUT
from ..params import SetupParams
from ..setmembership.dbsm import SMRun, verify_sm_run
from ..setmembership.dbrsm import RSMRun, verify_rsm_run

MAGIC = b"TMIX"
VERSION = 1
TAG_HEADER, TAG_PARAMS, TAG_MPK, TAG_CIPHERTEXTS, TAG_OUTPUTS, TAG_QUERY, TAG_END = 1, 2, 3, 4, 5, 6, 255
_KIND_CODE = {TRACE_IN: 1, TRACE_OUT: 2}
_KIND_NAME = {v: k for k, v in _KIND_CODE.items()}


def _section(w, tag, body):
    w.u8(tag).u32(len(body)).raw(body)


def encode_query(q, res):
    w = Writer().u32(q).u8(_KIND_CODE[res.kind]).index_set(res.I).index_set(res.J)
    w.u8(1 if res.aborted else 0).blob(res.reason.encode())
    for run in (res.main, res.complement):
        if run is None:
            w.u8(0)
        else:
            w.u8(1)
            run.write(w)
    return w.getvalue()


def encode_transcript(sid, params, mpk, ciphertexts, v_prime, results):
    w = Writer().raw(MAGIC).u8(VERSION)
    _section(w, TAG_HEADER, Writer().raw(sid).u32(len(ciphertexts)).u32(mpk.m).u32(len(results)).getvalue())
    _section(w, TAG_PARAMS, params.to_bytes())
    pw = Writer()
    mpk.write(pw)
    _section(w, TAG_MPK, pw.getvalue())
    cw = Writer().u32(len(ciphertexts))
    for c in ciphertexts:
        c.write(cw, mpk.pk_Z)
    _section(w, TAG_CIPHERTEXTS, cw.getvalue())
    ow = Writer().u32(len(v_prime))
    for v in v_prime:
        ow.scalar(v)
    _section(w, TAG_OUTPUTS, ow.getvalue())
    for q, res in enumerate(results):
        _section(w, TAG_QUERY, encode_query(q, res))
    _section(w, TAG_END, b"")
    return w.getvalue()


@dataclass
class QueryRecord:
    number: int
    kind: str
    I: frozenset
    J: frozenset
    aborted: bool
    reason: str
    main: object
    complement: object
    offset: int


@dataclass
class Transcript:
    session_id: bytes
    params: SetupParams
    mpk: MixnetPublicKey
    ciphertexts: list
    v_prime: list
    queries: list


def _expect_section(r, tag):
    start = r.offset
    got = r.u8()
    if got != tag:
        raise DecodeError(f"expected section {tag}, found {got}", start)
    length = r.u32()
    if length > r.remaining():
        raise DecodeError("section runs past the end of the file", start)
    return r.offset + length


def _close_section(r, end):
    if r.offset != end:
        raise DecodeError("section length does not match its contents", r.offset)


def decode_transcript(data):
    r = Reader(bytes(data))
    if r.take(4) != MAGIC:
        raise DecodeError("not a transcript (bad magic)", 0)
    version = r.u8()
    if version != VERSION:
        raise DecodeError(f"unsupported transcript version {version}", 4)

    end = _expect_section(r, TAG_HEADER)
    sid = r.take(16)
    n, m, nq = r.u32(), r.u32(), r.u32()
    _close_section(r, end)

    end = _expect_section(r, TAG_PARAMS)
    params = SetupParams.from_reader(r)
    _close_section(r, end)
    if params.m != m or params.n != n:
        raise DecodeError("parameter sizes disagree with the header", end)

    end = _expect_section(r, TAG_MPK)
    mpk = MixnetPublicKey.read(r)
    _close_section(r, end)
    if mpk.m != m:
        raise DecodeError("public key has the wrong number of servers", end)

    end = _expect_section(r, TAG_CIPHERTEXTS)
    start = r.offset
    if r.u32() != n:
        raise DecodeError("ciphertext count disagrees with the header", start)
    cts = [SenderCiphertext.read(r) for _ in range(n)]
    _close_section(r, end)

    end = _expect_section(r, TAG_OUTPUTS)
    start = r.offset
    if r.u32() != n:
        raise DecodeError("output count disagrees with the header", start)
    v_prime = [r.scalar() for _ in range(n)]
    _close_section(r, end)

    queries = []
    for expected_no in range(nq):
        end = _expect_section(r, TAG_QUERY)
        start = r.offset
        number = r.u32()
        if number != expected_no:
            raise DecodeError(f"query records out of order (found {number})", start)
        code_at = r.offset
        code = r.u8()
        if code not in _KIND_NAME:
            raise DecodeError(f"unknown query kind {code}", code_at)
        kind = _KIND_NAME[code]
        I, J = r.index_set(), r.index_set()
        aborted = bool(r.u8())
        reason = r.blob().decode("utf-8", "replace")
        runs = []
        for _ in range(2):
            if r.u8():
                runs.append((SMRun if kind == TRACE_IN else RSMRun).read(r))
            else:
                runs.append(None)
        _close_section(r, end)
        queries.append(QueryRecord(number, kind, I, J, aborted, reason, runs[0], runs[1], start))

    end = _expect_section(r, TAG_END)
    _close_section(r, end)
    r.expect_end()
    return Transcript(sid, params, mpk, cts, v_prime, queries)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    location: str = ""
    message: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "accept"
        return f"reject at {self.location}: {self.message}"


def _check_query(t, rec, context):
    n = len(t.ciphertexts)
    universe = frozenset(range(n))
    where = f"query {rec.number} ({rec.kind})"
    if rec.main is None or rec.complement is None:
        return Verdict(False, where, f"aborted before completing both runs: {rec.reason or 'no reason recorded'}")
    gammas = [c.gamma for c in t.ciphertexts]
    for label, run in (("main", rec.main), ("complement", rec.complement)):
        if rec.kind == TRACE_IN:
            want_I, want_J = rec.I, (rec.J if label == "main" else universe - rec.J)
        else:
            want_I, want_J = (rec.I if label == "main" else universe - rec.I), rec.J
        if run.I != want_I or run.J != want_J:
            return Verdict(False, f"{where}, {label} run", "index sets do not match the query")
        ctx = context + b"/" + label.encode()
        if rec.kind == TRACE_IN:
            fault = verify_sm_run(t.params, ctx, gammas, t.v_prime, run)
        else:
            fault = verify_rsm_run(t.params, ctx, gammas, [c.rho_gamma for c in t.ciphertexts], t.v_prime, run)
        if fault:
            return Verdict(False, f"{where}, {label} run", fault)
    target = rec.I if rec.kind == TRACE_IN else rec.J
    missing = target - (rec.main.accepted | rec.complement.accepted)
    if bool(missing) != rec.aborted:
        return Verdict(False, where, "recorded abort flag contradicts the complement rule")
    if missing:
        return Verdict(False, f"{where}, index {min(missing)}",
                       f"indices {sorted(missing)} were proven in neither the main nor the complement run")
    return None


def verify_transcript_bytes(data):
    from .session import query_context

    try:
        t = decode_transcript(data)
    except DecodeError as exc:
        return Verdict(False, f"byte {exc.offset}", str(exc).split(" at byte")[0])
    except ValueError as exc:
        return Verdict(False, "parse", str(exc))
    for i, c in enumerate(t.ciphertexts):
        if not verify_opening(t.params, c.gamma, c.rho_gamma):
            return Verdict(False, f"ciphertext {i}", "sender opening proof does not verify")
    for rec in t.queries:
        bad = _check_query(t, rec, query_context(t.session_id, rec.number))
        if bad is not None:
            return bad
    return Verdict(True)


def verify_transcript(path):
    """Accept, or reject with the location of the first fault."""
    if isinstance(path, (bytes, bytearray)):
        return verify_transcript_bytes(path)
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        return Verdict(False, str(path), f"cannot read transcript: {exc}")
    return verify_transcript_bytes(data)
