"""Plaintext reference answers for tracing queries.

Deliberately naive: straight set intersection over the cleartext input and
output lists, with no reference to any protocol code.
"""


def trace_in_oracle(values, outputs, I, J):
    wanted = {outputs[j] for j in J}
    return frozenset(i for i in I if values[i] in wanted)


def trace_out_oracle(values, outputs, I, J):
    wanted = {values[i] for i in I}
    return frozenset(j for j in J if outputs[j] in wanted)


def oracle(kind, values, outputs, I, J):
    if kind == "trace_in":
        return trace_in_oracle(values, outputs, I, J)
    if kind == "trace_out":
        return trace_out_oracle(values, outputs, I, J)
    raise ValueError(f"unknown query kind {kind!r}")
