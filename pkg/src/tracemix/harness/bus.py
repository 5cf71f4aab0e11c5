"""In-process authenticated message bus.

Parties never call each other; they post tagged byte payloads and read what
is addressed to them.  Delivery is per-sender FIFO.  ``recipient=None`` marks
a broadcast, which every role can read.  The log doubles as a record of who
saw what, which the tests use to check that prover roles never receive other
parties' proof responses.
"""

from dataclasses import dataclass


class ProtocolError(RuntimeError):
    """A required message was missing, duplicated or malformed."""


@dataclass(frozen=True)
class BusMessage:
    session: bytes
    phase: str
    sender: str
    recipient: str | None
    payload: bytes


class Bus:
    def __init__(self, session=b"", keep_log=True):
        self.session = bytes(session)
        self.keep_log = keep_log
        self._queues = {}
        self.log = []
        self.bytes_sent = 0

    def send(self, phase, sender, recipient, payload):
        msg = BusMessage(self.session, phase, sender, recipient, bytes(payload))
        self._queues.setdefault(phase, []).append(msg)
        self.bytes_sent += len(msg.payload)
        if self.keep_log:
            self.log.append(msg)
        return msg

    def broadcast(self, phase, sender, payload):
        return self.send(phase, sender, None, payload)

    def receive(self, role, phase, sender=None):
        """Messages of ``phase`` visible to ``role``, oldest first, optionally from one sender."""
        out = []
        for msg in self._queues.get(phase, ()):
            if msg.recipient is not None and msg.recipient != role:
                continue
            if sender is not None and msg.sender != sender:
                continue
            out.append(msg)
        return out

    def receive_one(self, role, phase, sender):
        msgs = self.receive(role, phase, sender)
        if len(msgs) != 1:
            raise ProtocolError(f"expected one {phase!r} message from {sender}, got {len(msgs)}")
        return msgs[0].payload

    def gather(self, role, phase, senders):
        """One payload per listed sender, in the order given."""
        return [self.receive_one(role, phase, s) for s in senders]

    def clear_phase(self, phase):
        self._queues.pop(phase, None)

    def clear(self):
        """Drop undelivered queues (the log, if kept, is untouched)."""
        self._queues.clear()

    def visible_to(self, role):
        return [m for m in self.log if m.recipient is None or m.recipient == role or m.sender == role]
