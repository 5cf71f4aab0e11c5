"""Sequential re-encryption shuffle.

Parties act one after another.  Each re-encrypts every ciphertext with fresh
randomness and then reorders the list so that its output slot j holds its
input slot perm[j].  With parties 1..m in order, output slot j therefore holds
input slot perm_1[perm_2[...perm_m[j]]]; :func:`composed_permutation` returns
that map.  Running the parties in reverse order with inverted permutations
undoes the forward shuffle.
"""

from ..algebra.encoding import Writer


def is_permutation(perm, n):
    return len(perm) == n and sorted(perm) == list(range(n))


def invert_permutation(perm):
    inv = [0] * len(perm)
    for j, i in enumerate(perm):
        inv[i] = j
    return inv


def composed_permutation(perms):
    """Map from output slot to input slot after shuffling with ``perms`` in order."""
    n = len(perms[0]) if perms else 0
    result = []
    for j in range(n):
        idx = j
        for perm in reversed(perms):
            idx = perm[idx]
        result.append(idx)
    return result


def shuffle_step(schemes, lists, perm, rng):
    """One party's hop over parallel lists, all moved by the same permutation."""
    out = []
    for scheme, cts in zip(schemes, lists):
        fresh = [scheme.renc(ct, rng) for ct in cts]
        out.append([fresh[perm[j]] for j in range(len(fresh))])
    return out


def shuffle(schemes, lists, perms, rngs, parties=None, bus=None, phase="shuffle"):
    """Run the hops in the order given.

    ``perms[t]`` and ``rngs[t]`` belong to the t-th acting party; ``parties``
    names them for the bus (default ``server0``, ``server1``, ...).  Returns
    the final parallel lists.
    """
    if len(schemes) != len(lists):
        raise ValueError("one scheme per list")
    if not lists:
        return []
    n = len(lists[0])
    if any(len(lst) != n for lst in lists):
        raise ValueError("parallel lists differ in length")
    if len(perms) != len(rngs):
        raise ValueError("one rng per permutation")
    for perm in perms:
        if not is_permutation(perm, n):
            raise ValueError("shuffle input is not a permutation of the list positions")
    if parties is None:
        parties = [f"server{t}" for t in range(len(perms))]
    current = [list(lst) for lst in lists]
    for name, perm, rng in zip(parties, perms, rngs):
        current = shuffle_step(schemes, current, perm, rng)
        if bus is not None:
            w = Writer()
            for scheme, cts in zip(schemes, current):
                for ct in cts:
                    w.raw(scheme.encode(ct))
            bus.broadcast(phase, name, w.getvalue())
    return current
