"""Discrete-time event scheduler."""
import heapq

from .errors import RunawayEvents, TimeInPast

DEFAULT_EVENT_CAP = 10**9


class EventScheduler:
    """Priority queue of ``(time, sequence, handler)`` events.

    Events run in lexicographic ``(time, sequence)`` order, where the sequence
    number is assigned at scheduling time, so same-instant events keep their
    scheduling order. ``advance_until(h)`` executes every event with
    ``time < h`` (half-open), including ones scheduled by handlers during the
    call.
    """

    def __init__(self, event_cap=DEFAULT_EVENT_CAP):
        self.current_time = 0.0
        self.event_cap = event_cap
        self._queue = []
        self._pending = set()
        self.next_sequence = 0

    def __len__(self):
        return len(self._pending)

    def schedule(self, time, handler):
        """Enqueue ``handler(world)`` at ``time``; returns a cancellation handle."""
        time = float(time)
        if time < self.current_time:
            raise TimeInPast(f"cannot schedule at {time} < current time {self.current_time}")
        seq = self.next_sequence
        self.next_sequence += 1
        heapq.heappush(self._queue, (time, seq, handler))
        self._pending.add(seq)
        return seq

    def cancel(self, handle):
        """True if ``handle`` was pending and is now removed."""
        try:
            self._pending.remove(handle)
        except KeyError:
            return False
        return True

    def peek_time(self):
        q = self._queue
        while q and q[0][1] not in self._pending:
            heapq.heappop(q)
        return q[0][0] if q else None

    def advance_until(self, horizon, world=None):
        """Run all events with time < horizon; returns how many ran."""
        horizon = float(horizon)
        if horizon < self.current_time:
            raise TimeInPast(f"horizon {horizon} is before current time {self.current_time}")
        q = self._queue
        pending = self._pending
        executed = 0
        while q and q[0][0] < horizon:
            time, seq, handler = heapq.heappop(q)
            if seq not in pending:
                continue
            pending.remove(seq)
            self.current_time = time
            executed += 1
            if executed > self.event_cap:
                raise RunawayEvents(f"more than {self.event_cap} events before t={horizon}")
            handler(world)
        self.current_time = horizon
        return executed
