"""Pure-Python BN254 backend.

Slow but dependency free. Elements mirror the native extension class for
class: same constructors, operators and byte encodings, so either backend
can sit behind :mod:`tracemix.algebra`.

Conventions (shared with the native core):

* G1 points: 32-byte big-endian x, flags in the top bits of byte 0
  (0x80 infinity, 0x40 "y is the larger root").
* G2 points: 64 bytes, x = x0 + x1*u written as x1 || x0, flags on x1.
* GT elements: 12 coefficients of the tower
  Fp2 = Fp[u]/(u^2+1), Fp6 = Fp2[v]/(v^3-(9+u)), Fp12 = Fp6[w]/(w^2-v),
  32 bytes each in order c0.c0.c0, c0.c0.c1, c0.c1.c0, ... c1.c2.c1.

Internally GT uses the flat basis Fp[w]/(w^12 - 18 w^6 + 82), which is the
same field (w^6 = 9 + u).
"""
from __future__ import annotations

P = 21888242871839275222246405745257275088696311157297823662689037894645226208583
R = 21888242871839275222246405745257275088548364400416034343698204186575808495617
BN_X = 4965661367192848881
ATE_LOOP = 6 * BN_X + 2
HALF_P = (P - 1) // 2

G1_BYTES = 32
G2_BYTES = 64
GT_BYTES = 384

_FLAG_INF = 0x80
_FLAG_BIG = 0x40


# ---------------------------------------------------------------- Fp2

def _f2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def _f2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def _f2_neg(a):
    return (-a[0] % P, -a[1] % P)


def _f2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def _f2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, 2 * a0 * a1 % P)


def _f2_muls(a, k):
    return (a[0] * k % P, a[1] * k % P)


def _f2_inv(a):
    a0, a1 = a
    t = pow(a0 * a0 + a1 * a1, -1, P)
    return (a0 * t % P, -a1 * t % P)


def _f2_conj(a):
    return (a[0], -a[1] % P)


def _f2_pow(a, e):
    out = (1, 0)
    while e:
        if e & 1:
            out = _f2_mul(out, a)
        a = _f2_sqr(a)
        e >>= 1
    return out


def _fp_sqrt(a):
    a %= P
    s = pow(a, (P + 1) // 4, P)
    return s if s * s % P == a else None


def _f2_sqrt(a):
    a0, a1 = a
    if a1 == 0:
        s = _fp_sqrt(a0)
        if s is not None:
            return (s, 0)
        s = _fp_sqrt(-a0)
        return None if s is None else (0, s)
    n = _fp_sqrt(a0 * a0 + a1 * a1)
    if n is None:
        return None
    inv2 = (P + 1) // 2
    x0 = _fp_sqrt((a0 + n) * inv2)
    if x0 is None:
        x0 = _fp_sqrt((a0 - n) * inv2)
        if x0 is None:
            return None
    x1 = a1 * pow(2 * x0, -1, P) % P
    cand = (x0, x1)
    return cand if _f2_sqr(cand) == (a0 % P, a1 % P) else None


def _f2_is_big(a):
    if a[1]:
        return a[1] > HALF_P
    return a[0] > HALF_P


XI = (9, 1)
B1 = 3
B2 = _f2_mul((3, 0), _f2_inv(XI))
# twist Frobenius constants
_FROB_X1 = _f2_pow(XI, (P - 1) // 3)
_FROB_Y1 = _f2_pow(XI, (P - 1) // 2)
_FROB_X2 = _f2_pow(XI, (P * P - 1) // 3)
_FROB_Y2 = _f2_pow(XI, (P * P - 1) // 2)

# ---------------------------------------------------------------- Fp12 (flat)

_ONE12 = (1,) + (0,) * 11


def _f12_mul(a, b):
    t = [0] * 23
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    t[i + j] += ai * bj
    for k in range(22, 11, -1):
        c = t[k]
        if c:
            t[k - 6] += 18 * c
            t[k - 12] -= 82 * c
    return tuple(x % P for x in t[:12])


def _f12_pow(a, e):
    out = _ONE12
    for bit in bin(e)[2:]:
        out = _f12_mul(out, out)
        if bit == "1":
            out = _f12_mul(out, a)
    return out


def _f12_conj(a):
    return tuple(c if i % 2 == 0 else -c % P for i, c in enumerate(a))


def _to_tower(a):
    out = []
    for t in range(6):
        e1 = a[t + 6]
        out.append(((a[t] + 9 * e1) % P, e1 % P))
    # out[t] is the Fp2 coefficient of w^t; tower slot (i, j) holds w^(2j+i)
    c0 = (out[0], out[2], out[4])
    c1 = (out[1], out[3], out[5])
    return c0, c1


def _from_tower(c0, c1):
    a = [0] * 12
    for j in range(3):
        for i, c in ((0, c0[j]), (1, c1[j])):
            t = 2 * j + i
            a[t] = (c[0] - 9 * c[1]) % P
            a[t + 6] = c[1] % P
    return tuple(a)


def _f6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = _f2_mul(a0, b0)
    t1 = _f2_mul(a1, b1)
    t2 = _f2_mul(a2, b2)
    c0 = _f2_add(t0, _f2_mul(XI, _f2_sub(_f2_mul(_f2_add(a1, a2), _f2_add(b1, b2)), _f2_add(t1, t2))))
    c1 = _f2_add(_f2_sub(_f2_mul(_f2_add(a0, a1), _f2_add(b0, b1)), _f2_add(t0, t1)), _f2_mul(XI, t2))
    c2 = _f2_add(_f2_sub(_f2_mul(_f2_add(a0, a2), _f2_add(b0, b2)), _f2_add(t0, t2)), t1)
    return (c0, c1, c2)


def _f6_inv(a):
    a0, a1, a2 = a
    t0 = _f2_sub(_f2_sqr(a0), _f2_mul(XI, _f2_mul(a1, a2)))
    t1 = _f2_sub(_f2_mul(XI, _f2_sqr(a2)), _f2_mul(a0, a1))
    t2 = _f2_sub(_f2_sqr(a1), _f2_mul(a0, a2))
    d = _f2_add(_f2_mul(a0, t0), _f2_mul(XI, _f2_add(_f2_mul(a2, t1), _f2_mul(a1, t2))))
    di = _f2_inv(d)
    return (_f2_mul(t0, di), _f2_mul(t1, di), _f2_mul(t2, di))


def _f6_mul_v(a):
    return (_f2_mul(XI, a[2]), a[0], a[1])


def _f12_inv(a):
    c0, c1 = _to_tower(a)
    d = tuple(_f2_sub(x, y) for x, y in zip(_f6_mul(c0, c0), _f6_mul_v(_f6_mul(c1, c1))))
    di = _f6_inv(d)
    n1 = _f6_mul(c1, di)
    return _from_tower(_f6_mul(c0, di), tuple(_f2_neg(x) for x in n1))


def _frob2_consts():
    # w^(p^2) = omega * w with omega in Fp
    om = _f2_pow(XI, (P * P - 1) // 6)
    assert om[1] == 0
    return [pow(om[0], t, P) for t in range(12)]


_FROB2 = _frob2_consts()


def _f12_frob2(a):
    return tuple(c * k % P for c, k in zip(a, _FROB2))


# The hard part carries the extra factor 2x(6x^2+3x+1) that the addition-chain
# formulation used by arkworks (and most BN libraries) produces, so both
# backends agree on pairing bytes.
_HARD_EXP = (P ** 4 - P ** 2 + 1) // R * (2 * BN_X * (6 * BN_X * BN_X + 3 * BN_X + 1))


def _final_exp(f):
    f = _f12_mul(_f12_conj(f), _f12_inv(f))
    f = _f12_mul(_f12_frob2(f), f)
    return _f12_pow(f, _HARD_EXP)


# ---------------------------------------------------------------- curves

def _g1_double(p):
    X, Y, Z = p
    if Z == 0 or Y == 0:
        return (1, 1, 0)
    A = X * X % P
    B = Y * Y % P
    C = B * B % P
    D = 2 * ((X + B) ** 2 - A - C) % P
    E = 3 * A
    F = E * E % P
    X3 = (F - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * Y * Z % P
    return (X3, Y3, Z3)


def _g1_add(p, q):
    X1, Y1, Z1 = p
    X2, Y2, Z2 = q
    if Z1 == 0:
        return q
    if Z2 == 0:
        return p
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    U1 = X1 * Z2Z2 % P
    U2 = X2 * Z1Z1 % P
    S1 = Y1 * Z2 * Z2Z2 % P
    S2 = Y2 * Z1 * Z1Z1 % P
    if U1 == U2:
        if S1 == S2:
            return _g1_double(p)
        return (1, 1, 0)
    H = U2 - U1
    I = (2 * H) ** 2 % P
    J = H * I % P
    r = 2 * (S2 - S1)
    V = U1 * I % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * S1 * J) % P
    Z3 = ((Z1 + Z2) ** 2 - Z1Z1 - Z2Z2) * H % P
    return (X3, Y3, Z3)


def _g1_neg(p):
    return (p[0], -p[1] % P, p[2])


def _g1_affine(p):
    X, Y, Z = p
    if Z == 0:
        return None
    zi = pow(Z, -1, P)
    zi2 = zi * zi % P
    return (X * zi2 % P, Y * zi2 * zi % P)


def _g1_mul(p, k):
    k %= R
    out = (1, 1, 0)
    for bit in bin(k)[2:]:
        out = _g1_double(out)
        if bit == "1":
            out = _g1_add(out, p)
    return out


_O2 = ((1, 0), (1, 0), (0, 0))


def _g2_double(p):
    X, Y, Z = p
    if Z == (0, 0) or Y == (0, 0):
        return _O2
    A = _f2_sqr(X)
    B = _f2_sqr(Y)
    C = _f2_sqr(B)
    D = _f2_muls(_f2_sub(_f2_sub(_f2_sqr(_f2_add(X, B)), A), C), 2)
    E = _f2_muls(A, 3)
    F = _f2_sqr(E)
    X3 = _f2_sub(F, _f2_muls(D, 2))
    Y3 = _f2_sub(_f2_mul(E, _f2_sub(D, X3)), _f2_muls(C, 8))
    Z3 = _f2_muls(_f2_mul(Y, Z), 2)
    return (X3, Y3, Z3)


def _g2_add(p, q):
    X1, Y1, Z1 = p
    X2, Y2, Z2 = q
    if Z1 == (0, 0):
        return q
    if Z2 == (0, 0):
        return p
    Z1Z1 = _f2_sqr(Z1)
    Z2Z2 = _f2_sqr(Z2)
    U1 = _f2_mul(X1, Z2Z2)
    U2 = _f2_mul(X2, Z1Z1)
    S1 = _f2_mul(_f2_mul(Y1, Z2), Z2Z2)
    S2 = _f2_mul(_f2_mul(Y2, Z1), Z1Z1)
    if U1 == U2:
        if S1 == S2:
            return _g2_double(p)
        return _O2
    H = _f2_sub(U2, U1)
    I = _f2_sqr(_f2_muls(H, 2))
    J = _f2_mul(H, I)
    r = _f2_muls(_f2_sub(S2, S1), 2)
    V = _f2_mul(U1, I)
    X3 = _f2_sub(_f2_sub(_f2_sqr(r), J), _f2_muls(V, 2))
    Y3 = _f2_sub(_f2_mul(r, _f2_sub(V, X3)), _f2_muls(_f2_mul(S1, J), 2))
    Z3 = _f2_mul(_f2_sub(_f2_sub(_f2_sqr(_f2_add(Z1, Z2)), Z1Z1), Z2Z2), H)
    return (X3, Y3, Z3)


def _g2_neg(p):
    return (p[0], _f2_neg(p[1]), p[2])


def _g2_affine(p):
    X, Y, Z = p
    if Z == (0, 0):
        return None
    zi = _f2_inv(Z)
    zi2 = _f2_sqr(zi)
    return (_f2_mul(X, zi2), _f2_mul(_f2_mul(Y, zi2), zi))


def _g2_mul_raw(p, k):
    out = _O2
    for bit in bin(k)[2:]:
        out = _g2_double(out)
        if bit == "1":
            out = _g2_add(out, p)
    return out


def _g2_mul(p, k):
    return _g2_mul_raw(p, k % R)


def _g2_on_curve(x, y):
    return _f2_sqr(y) == _f2_add(_f2_mul(_f2_sqr(x), x), B2)


# cofactor of the order-r subgroup of E'(Fp2)
G2_COFACTOR = 2 * P - R

# ---------------------------------------------------------------- encodings

def _g1_encode(p):
    a = _g1_affine(p)
    if a is None:
        out = bytearray(G1_BYTES)
        out[0] = _FLAG_INF
        return bytes(out)
    x, y = a
    out = bytearray(x.to_bytes(32, "big"))
    if y > HALF_P:
        out[0] |= _FLAG_BIG
    return bytes(out)


def _g1_decode(data):
    if len(data) != G1_BYTES:
        raise ValueError("G1 encoding must be 32 bytes")
    flags = data[0] & 0xC0
    body = bytes([data[0] & 0x3F]) + bytes(data[1:])
    x = int.from_bytes(body, "big")
    if flags & _FLAG_INF:
        if flags != _FLAG_INF or x:
            raise ValueError("malformed G1 infinity")
        return (1, 1, 0)
    if x >= P:
        raise ValueError("G1 x out of range")
    y = _fp_sqrt(x * x * x + B1)
    if y is None:
        raise ValueError("not a G1 point")
    if (y > HALF_P) != bool(flags & _FLAG_BIG):
        y = P - y
    # cofactor 1: every curve point lies in G1
    return (x, y, 1)


def _g2_encode(p):
    a = _g2_affine(p)
    if a is None:
        out = bytearray(G2_BYTES)
        out[0] = _FLAG_INF
        return bytes(out)
    x, y = a
    out = bytearray(x[1].to_bytes(32, "big") + x[0].to_bytes(32, "big"))
    if _f2_is_big(y):
        out[0] |= _FLAG_BIG
    return bytes(out)


def _g2_decode(data, check_subgroup=True):
    if len(data) != G2_BYTES:
        raise ValueError("G2 encoding must be 64 bytes")
    flags = data[0] & 0xC0
    x1 = int.from_bytes(bytes([data[0] & 0x3F]) + bytes(data[1:32]), "big")
    x0 = int.from_bytes(data[32:], "big")
    if flags & _FLAG_INF:
        if flags != _FLAG_INF or x0 or x1:
            raise ValueError("malformed G2 infinity")
        return _O2
    if x0 >= P or x1 >= P:
        raise ValueError("G2 x out of range")
    x = (x0, x1)
    y = _f2_sqrt(_f2_add(_f2_mul(_f2_sqr(x), x), B2))
    if y is None:
        raise ValueError("not a G2 point")
    if _f2_is_big(y) != bool(flags & _FLAG_BIG):
        y = _f2_neg(y)
    pt = (x, y, (1, 0))
    if check_subgroup and _g2_mul_raw(pt, R)[2] != (0, 0):
        raise ValueError("G2 point outside the prime-order subgroup")
    return pt


def _gt_encode(a):
    c0, c1 = _to_tower(a)
    parts = []
    for half in (c0, c1):
        for e in half:
            parts.append(e[0].to_bytes(32, "big"))
            parts.append(e[1].to_bytes(32, "big"))
    return b"".join(parts)


def _gt_decode(data):
    if len(data) != GT_BYTES:
        raise ValueError("GT encoding must be 384 bytes")
    vals = [int.from_bytes(data[32 * i:32 * i + 32], "big") for i in range(12)]
    if any(v >= P for v in vals):
        raise ValueError("GT coefficient out of range")
    f2s = [(vals[2 * i], vals[2 * i + 1]) for i in range(6)]
    a = _from_tower(tuple(f2s[:3]), tuple(f2s[3:]))
    if _f12_pow(a, R) != _ONE12:
        raise ValueError("not an element of GT")
    return a


# ---------------------------------------------------------------- pairing

def _line(lam, xt, yt, xp, yp):
    # l = yP - lam*xP*w + (lam*xT - yT)*w^3, Fp2 coefficient c at w^t
    # lands on flat slots t and t+6
    a = _f2_muls(lam, xp)
    mu = _f2_sub(_f2_mul(lam, xt), yt)
    out = [0] * 12
    out[0] = yp
    out[1] = (-a[0] + 9 * a[1]) % P
    out[7] = -a[1] % P
    out[3] = (mu[0] - 9 * mu[1]) % P
    out[9] = mu[1]
    return tuple(out)


def _miller(p_aff, q_aff):
    xp, yp = p_aff
    xq, yq = q_aff
    f = _ONE12
    xt, yt = xq, yq
    for bit in bin(ATE_LOOP)[3:]:
        lam = _f2_mul(_f2_muls(_f2_sqr(xt), 3), _f2_inv(_f2_muls(yt, 2)))
        f = _f12_mul(_f12_mul(f, f), _line(lam, xt, yt, xp, yp))
        x3 = _f2_sub(_f2_sqr(lam), _f2_muls(xt, 2))
        yt = _f2_sub(_f2_mul(lam, _f2_sub(xt, x3)), yt)
        xt = x3
        if bit == "1":
            f, xt, yt = _add_step(f, xt, yt, xq, yq, xp, yp)
    q1 = (_f2_mul(_f2_conj(xq), _FROB_X1), _f2_mul(_f2_conj(yq), _FROB_Y1))
    q2 = (_f2_mul(xq, _FROB_X2), _f2_neg(_f2_mul(yq, _FROB_Y2)))
    f, xt, yt = _add_step(f, xt, yt, q1[0], q1[1], xp, yp)
    f, xt, yt = _add_step(f, xt, yt, q2[0], q2[1], xp, yp)
    return f


def _add_step(f, xt, yt, xq, yq, xp, yp):
    lam = _f2_mul(_f2_sub(yq, yt), _f2_inv(_f2_sub(xq, xt)))
    f = _f12_mul(f, _line(lam, xt, yt, xp, yp))
    x3 = _f2_sub(_f2_sub(_f2_sqr(lam), xt), xq)
    y3 = _f2_sub(_f2_mul(lam, _f2_sub(xt, x3)), yt)
    return f, x3, y3


def _miller_product(pairs):
    f = _ONE12
    for a, b in pairs:
        pa = _g1_affine(a._p)
        qa = _g2_affine(b._p)
        if pa is None or qa is None:
            continue
        f = _f12_mul(f, _miller(pa, qa))
    return f


# ---------------------------------------------------------------- public classes

class G1:
    __slots__ = ("_p",)

    def __init__(self, _p):
        self._p = _p

    @classmethod
    def identity(cls):
        return cls((1, 1, 0))

    @classmethod
    def generator(cls):
        return cls((1, 2, 1))

    @classmethod
    def from_bytes(cls, data):
        return cls(_g1_decode(bytes(data)))

    def to_bytes(self):
        return _g1_encode(self._p)

    def __mul__(self, other):
        if not isinstance(other, G1):
            return NotImplemented
        return G1(_g1_add(self._p, other._p))

    def __truediv__(self, other):
        if not isinstance(other, G1):
            return NotImplemented
        return G1(_g1_add(self._p, _g1_neg(other._p)))

    def __pow__(self, k):
        return G1(_g1_mul(self._p, k))

    def inverse(self):
        return G1(_g1_neg(self._p))

    def is_identity(self):
        return self._p[2] == 0

    def __eq__(self, other):
        if not isinstance(other, G1):
            return NotImplemented
        return _g1_affine(self._p) == _g1_affine(other._p)

    def __hash__(self):
        return hash(self.to_bytes())

    def __repr__(self):
        return f"G1({self.to_bytes().hex()[:16]}...)"


class G2:
    __slots__ = ("_p",)

    def __init__(self, _p):
        self._p = _p

    @classmethod
    def identity(cls):
        return cls(_O2)

    @classmethod
    def generator(cls):
        return cls((
            (10857046999023057135944570762232829481370756359578518086990519993285655852781,
             11559732032986387107991004021392285783925812861821192530917403151452391805634),
            (8495653923123431417604973247489272438418190587263600148770280649306958101930,
             4082367875863433681332203403145435568316851327593401208105741076214120093531),
            (1, 0),
        ))

    @classmethod
    def from_bytes(cls, data):
        return cls(_g2_decode(bytes(data)))

    def to_bytes(self):
        return _g2_encode(self._p)

    def __mul__(self, other):
        if not isinstance(other, G2):
            return NotImplemented
        return G2(_g2_add(self._p, other._p))

    def __truediv__(self, other):
        if not isinstance(other, G2):
            return NotImplemented
        return G2(_g2_add(self._p, _g2_neg(other._p)))

    def __pow__(self, k):
        return G2(_g2_mul(self._p, k))

    def inverse(self):
        return G2(_g2_neg(self._p))

    def is_identity(self):
        return self._p[2] == (0, 0)

    def __eq__(self, other):
        if not isinstance(other, G2):
            return NotImplemented
        return _g2_affine(self._p) == _g2_affine(other._p)

    def __hash__(self):
        return hash(self.to_bytes())

    def __repr__(self):
        return f"G2({self.to_bytes().hex()[:16]}...)"


class GT:
    __slots__ = ("_a",)

    def __init__(self, _a):
        self._a = _a

    @classmethod
    def identity(cls):
        return cls(_ONE12)

    @classmethod
    def from_bytes(cls, data):
        return cls(_gt_decode(bytes(data)))

    def to_bytes(self):
        return _gt_encode(self._a)

    def __mul__(self, other):
        if not isinstance(other, GT):
            return NotImplemented
        return GT(_f12_mul(self._a, other._a))

    def __truediv__(self, other):
        if not isinstance(other, GT):
            return NotImplemented
        return GT(_f12_mul(self._a, _f12_conj(other._a)))

    def __pow__(self, k):
        k %= R
        return GT(_f12_pow(self._a, k))

    def inverse(self):
        # unitary: inverse is the conjugate
        return GT(_f12_conj(self._a))

    def is_identity(self):
        return self._a == _ONE12

    def __eq__(self, other):
        if not isinstance(other, GT):
            return NotImplemented
        return self._a == other._a

    def __hash__(self):
        return hash(self._a)

    def __repr__(self):
        return f"GT({self.to_bytes().hex()[:16]}...)"


def pairing(a, b):
    return GT(_final_exp(_miller_product([(a, b)])))


def multi_pairing(pairs):
    return GT(_final_exp(_miller_product(pairs)))


def g2_from_bytes_cleared(data):
    """Decode any twist point (no subgroup check) and clear the cofactor."""
    pt = _g2_decode(bytes(data), check_subgroup=False)
    return G2(_g2_mul_raw(pt, G2_COFACTOR))


def g1_multi_exp(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("length mismatch")
    acc = G1.identity()
    for pt, k in zip(points, scalars):
        acc = acc * pt ** k
    return acc


def g2_multi_exp(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("length mismatch")
    acc = G2.identity()
    for pt, k in zip(points, scalars):
        acc = acc * pt ** k
    return acc


def gt_multi_exp(elems, scalars):
    if len(elems) != len(scalars):
        raise ValueError("length mismatch")
    acc = GT.identity()
    for e, k in zip(elems, scalars):
        acc = acc * e ** k
    return acc


BACKEND = "python"
