"""Multi-level blackboard: compartment levels, signals, events and the trace.

The board is the only channel through which agents communicate.  Signals live
at compartment levels; every posted signal yields an Event whose candidate set
is computed from the registered rule index.  Rule firings are recorded as an
append-only trace, from which vertical "agency columns" can be extracted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NegativeMagnitude, UnknownLevel

DEFAULT_LEVELS = ("membrane", "juxtamembrane", "cytoplasm", "nucleus")

EXTERNAL = "EXTERNAL"


class SignalKind:
    MOLECULE = "SignallingMolecule"
    ACTIVATION = "ActivationSignal"
    INACTIVATION = "InactivationSignal"

    ALL = (MOLECULE, ACTIVATION, INACTIVATION)


@dataclass(frozen=True)
class CompartmentLevel:
    name: str
    index: int


@dataclass(slots=True)
class Signal:
    id: int
    kind: str
    producer: str
    level: str
    subject: str
    magnitude: float
    tick: int


@dataclass(frozen=True)
class Event:
    signal: Signal
    candidates: frozenset  # agent identities
    rules: tuple = field(default=(), compare=False)  # matched rules, cached at post()


@dataclass(slots=True)
class TraceEntry:
    tick: int
    agent: str
    rule: str
    consumed: tuple  # signal ids
    produced: tuple  # signal ids
    level_span: tuple  # (lo, hi) level indices touched
    error: str | None = None


@dataclass
class AgencyColumn:
    entries: tuple  # TraceEntry references, causally ordered
    levels_crossed: frozenset  # level indices


class Blackboard:
    """Ordered compartment levels plus signal storage and the trace."""

    def __init__(self, levels=DEFAULT_LEVELS):
        names = list(levels)
        if len(set(names)) != len(names):
            raise ValueError("level names must be unique: %r" % (names,))
        self.levels = tuple(CompartmentLevel(n, i) for i, n in enumerate(names))
        self._index = {lvl.name: lvl.index for lvl in self.levels}
        self._signals = {lvl.name: [] for lvl in self.levels}
        self._by_id = {}
        self._trace = []
        # (kind, subject) -> list of rules; populated by the rule engine
        self._rule_index = {}
        # (kind, subject, level) -> (candidate owners, rules); cleared when
        # the rule index changes
        self._post_cache = {}
        self._next_id = 1

    # -- levels --------------------------------------------------------------

    def level_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownLevel("no compartment level named %r" % (name,)) from None

    def has_level(self, name):
        return name in self._index

    def level_after(self, name):
        """Name of the next level inward (used for receptor activation)."""
        i = min(self.level_index(name) + 1, len(self.levels) - 1)
        return self.levels[i].name

    # -- rule index ----------------------------------------------------------

    def register_rule(self, rule):
        self._post_cache.clear()
        for subject in rule.pattern.subjects:
            self._rule_index.setdefault((rule.pattern.kind, subject), []).append(rule)

    def unregister_owner(self, owner):
        self._post_cache.clear()
        for key in list(self._rule_index):
            kept = [r for r in self._rule_index[key] if r.owner != owner]
            if kept:
                self._rule_index[key] = kept
            else:
                del self._rule_index[key]

    def rules_for(self, signal):
        """Rules whose condition pattern matches the signal's (kind, subject, level)."""
        matches = []
        for rule in self._rule_index.get((signal.kind, signal.subject), ()):
            if rule.pattern.level is None or rule.pattern.level == signal.level:
                matches.append(rule)
        return matches

    # -- signals -------------------------------------------------------------

    def new_signal(self, kind, producer, level, subject, magnitude, tick):
        if magnitude < 0:
            raise NegativeMagnitude("signal magnitude must be >= 0, got %r" % magnitude)
        self.level_index(level)
        sig = Signal(self._next_id, kind, producer, level, subject, float(magnitude), tick)
        self._next_id += 1
        return sig

    def post(self, signal):
        """Store the signal at its level and return the triggered Event."""
        if signal.magnitude < 0:
            raise NegativeMagnitude("signal magnitude must be >= 0, got %r" % signal.magnitude)
        self.level_index(signal.level)
        self._signals[signal.level].append(signal)
        self._by_id[signal.id] = signal
        key = (signal.kind, signal.subject, signal.level)
        cached = self._post_cache.get(key)
        if cached is None:
            rules = self.rules_for(signal)
            cached = (frozenset(r.owner for r in rules), tuple(rules))
            self._post_cache[key] = cached
        return Event(signal, cached[0], cached[1])

    def read_level(self, level, kind=None, subject=None):
        self.level_index(level)
        out = [
            s
            for s in self._signals[level]
            if (kind is None or s.kind == kind) and (subject is None or s.subject == subject)
        ]
        out.sort(key=lambda s: (s.tick, s.id))
        return out

    def signal(self, sid):
        return self._by_id[sid]

    def purge_transient(self, before_tick):
        """Drop activation/inactivation signals already processed.

        Molecule signals persist; state signals are consumed by the tick that
        dispatched their events.
        """
        for name, sigs in self._signals.items():
            self._signals[name] = [
                s
                for s in sigs
                if s.kind == SignalKind.MOLECULE or s.tick >= before_tick
            ]

    # -- trace ---------------------------------------------------------------

    def record(self, entry):
        self._trace.append(entry)

    def trace_log(self):
        return tuple(self._trace)

    def trace_len(self):
        return len(self._trace)

    def trace_since(self, mark):
        """Entries recorded at or after the given trace_len() mark."""
        return self._trace[mark:]


def post_signal(board, signal):
    return board.post(signal)


def read_level(board, level, kind=None, subject=None):
    return board.read_level(level, kind=kind, subject=subject)


def trace_log(board):
    return board.trace_log()


def _span_levels(entry):
    lo, hi = entry.level_span
    return set(range(lo, hi + 1))


def extract_columns(trace):
    """All maximal causal chains in the produced/consumed graph crossing >= 2 levels.

    Entry j follows entry i when some signal produced by i is consumed by j.
    Chains are enumerated from root entries (no causal predecessor) to sinks;
    chains confined to a single level are discarded.  Output order is
    deterministic given the trace.
    """
    trace = list(trace)
    produced_by = {}
    for i, entry in enumerate(trace):
        for sid in entry.produced:
            produced_by[sid] = i

    succ = {i: [] for i in range(len(trace))}
    has_pred = set()
    for j, entry in enumerate(trace):
        for sid in entry.consumed:
            i = produced_by.get(sid)
            if i is not None and i != j:
                succ[i].append(j)
                has_pred.add(j)
    for i in succ:
        succ[i] = sorted(set(succ[i]))

    columns = []

    def walk(path):
        last = path[-1]
        nexts = succ[last]
        if not nexts:
            levels = set()
            for i in path:
                levels |= _span_levels(trace[i])
            if len(levels) >= 2:
                columns.append(
                    AgencyColumn(
                        entries=tuple(trace[i] for i in path),
                        levels_crossed=frozenset(levels),
                    )
                )
            return
        for j in nexts:
            walk(path + [j])

    for i in range(len(trace)):
        if i not in has_pred:
            walk([i])
    return columns
