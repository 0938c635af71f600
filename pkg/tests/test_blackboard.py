import pytest

from cellulat.blackboard import (
    DEFAULT_LEVELS,
    Blackboard,
    SignalKind,
    TraceEntry,
    extract_columns,
)
from cellulat.errors import NegativeMagnitude, UnknownLevel
from cellulat.rules import Rule, SignalPattern

from helpers import make_rng, oracle_columns


def make_signal(board, kind=SignalKind.MOLECULE, producer="EXTERNAL",
                level="membrane", subject="EGF", magnitude=1.0, tick=0):
    return board.new_signal(kind, producer, level, subject, magnitude, tick)


class TestLevels:
    def test_default_levels_in_order(self):
        board = Blackboard()
        assert [lvl.name for lvl in board.levels] == list(DEFAULT_LEVELS)
        assert board.level_index("membrane") == 0
        assert board.level_index("nucleus") == 3

    def test_unknown_level_raises(self):
        board = Blackboard()
        with pytest.raises(UnknownLevel):
            board.level_index("mitochondrion")

    def test_duplicate_level_names_rejected(self):
        with pytest.raises(ValueError):
            Blackboard(["membrane", "membrane"])

    def test_level_after_saturates_at_innermost(self):
        board = Blackboard()
        assert board.level_after("membrane") == "juxtamembrane"
        assert board.level_after("nucleus") == "nucleus"


class TestSignals:
    def test_ids_are_monotone(self):
        board = Blackboard()
        a = make_signal(board)
        b = make_signal(board)
        assert b.id > a.id

    def test_negative_magnitude_rejected(self):
        board = Blackboard()
        with pytest.raises(NegativeMagnitude):
            make_signal(board, magnitude=-0.1)

    def test_new_signal_checks_level(self):
        board = Blackboard()
        with pytest.raises(UnknownLevel):
            make_signal(board, level="nowhere")

    def test_post_stores_at_level(self):
        board = Blackboard()
        sig = make_signal(board)
        board.post(sig)
        stored = board.read_level("membrane")
        assert stored == [sig]
        assert board.read_level("cytoplasm") == []

    def test_read_level_filters_kind_and_subject(self):
        board = Blackboard()
        egf = make_signal(board, subject="EGF")
        other = make_signal(board, subject="NGF")
        act = make_signal(board, kind=SignalKind.ACTIVATION, subject="EGFR")
        for s in (egf, other, act):
            board.post(s)
        assert board.read_level("membrane", subject="EGF") == [egf]
        assert board.read_level("membrane", kind=SignalKind.ACTIVATION) == [act]

    def test_read_level_orders_by_tick_then_id(self):
        board = Blackboard()
        late = make_signal(board, tick=5)
        early = make_signal(board, tick=1)
        board.post(late)
        board.post(early)
        assert board.read_level("membrane") == [early, late]

    def test_purge_keeps_molecules_drops_old_state_signals(self):
        board = Blackboard()
        mol = make_signal(board, tick=0)
        stale = make_signal(board, kind=SignalKind.ACTIVATION, subject="R", tick=0)
        fresh = make_signal(board, kind=SignalKind.ACTIVATION, subject="R", tick=3)
        for s in (mol, stale, fresh):
            board.post(s)
        board.purge_transient(3)
        assert board.read_level("membrane") == [mol, fresh]


class TestRuleIndex:
    def _rule(self, rid="R/lv/EGF", owner="R", subject="EGF", level="membrane"):
        return Rule(
            id=rid, owner=owner, behaviour="external-interaction",
            pattern=SignalPattern(SignalKind.MOLECULE, frozenset([subject]), level))

    def test_event_candidates_come_from_matching_rules(self):
        board = Blackboard()
        board.register_rule(self._rule())
        board.register_rule(self._rule(rid="Q/lv/EGF", owner="Q"))
        event = board.post(make_signal(board))
        assert event.candidates == frozenset({"R", "Q"})

    def test_level_constrained_rule_ignores_other_levels(self):
        board = Blackboard()
        board.register_rule(self._rule(level="cytoplasm"))
        event = board.post(make_signal(board, level="membrane"))
        assert event.candidates == frozenset()

    def test_wildcard_level_matches_everywhere(self):
        board = Blackboard()
        board.register_rule(self._rule(level=None))
        event = board.post(make_signal(board, level="nucleus"))
        assert event.candidates == frozenset({"R"})

    def test_unregister_owner(self):
        board = Blackboard()
        board.register_rule(self._rule())
        board.unregister_owner("R")
        assert board.post(make_signal(board)).candidates == frozenset()


def entry(tick, agent, consumed, produced, span):
    return TraceEntry(tick=tick, agent=agent, rule="%s/x" % agent,
                      consumed=tuple(consumed), produced=tuple(produced),
                      level_span=span)


class TestColumns:
    def test_single_level_chain_is_not_a_column(self):
        trace = [
            entry(1, "A", (), (1,), (2, 2)),
            entry(2, "B", (1,), (2,), (2, 2)),
        ]
        assert extract_columns(trace) == []

    def test_two_level_chain_is_a_column(self):
        trace = [
            entry(1, "R", (1,), (2,), (0, 1)),
            entry(2, "P", (2,), (3,), (2, 2)),
        ]
        cols = extract_columns(trace)
        assert len(cols) == 1
        assert cols[0].levels_crossed == frozenset({0, 1, 2})
        assert [e.agent for e in cols[0].entries] == ["R", "P"]

    def test_branching_produces_one_column_per_maximal_path(self):
        trace = [
            entry(1, "R", (1,), (2,), (0, 1)),
            entry(2, "P", (2,), (3,), (2, 2)),
            entry(2, "Q", (2,), (4,), (3, 3)),
        ]
        cols = extract_columns(trace)
        assert sorted(tuple(e.agent for e in c.entries) for c in cols) == [
            ("R", "P"), ("R", "Q")]

    def test_matches_brute_force_oracle_on_random_traces(self):
        rng = make_rng(20260823)
        for _ in range(300):
            n = rng.randint(1, 7)
            next_sid = 1
            trace = []
            open_signals = []
            for t in range(n):
                consumed = tuple(
                    s for s in open_signals if rng.random() < 0.4)[:2]
                produced = tuple(range(next_sid, next_sid + rng.randint(0, 2)))
                next_sid += len(produced)
                open_signals.extend(produced)
                lo = rng.randint(0, 3)
                hi = rng.randint(lo, 3)
                trace.append(entry(t, "A%d" % t, consumed, produced, (lo, hi)))
            got = sorted(
                (tuple(trace.index(e) for e in col.entries), col.levels_crossed)
                for col in extract_columns(trace))
            assert got == oracle_columns(trace)
