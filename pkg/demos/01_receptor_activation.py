"""Walk through the receptor activation ladder, one tick at a time.

Doses EGF onto the bundled model and prints the EGFR state transitions
(bind -> dimerize -> autophosphorylate -> activate) plus the signals the
receptor leaves on the blackboard.
"""

from cellulat import World, bundled_mapk, inject_ligand, step
from cellulat.blackboard import SignalKind


def main():
    world = World.from_pathway(bundled_mapk())
    inject_ligand(world, "EGF", 2.0, "membrane")
    egfr = world.agents["EGFR"]

    print("tick  bound  SS  PS  AS  activation signals at juxtamembrane")
    for _ in range(6):
        step(world)
        signals = world.board.read_level(
            "juxtamembrane", kind=SignalKind.ACTIVATION, subject="EGFR")
        print("%4d  %5s  %2d  %2d  %2d  %s" % (
            world.tick, egfr.ligand_bound, egfr.ss, egfr.ps, egfr.as_state,
            ", ".join("#%d@t%d" % (s.id, s.tick) for s in signals) or "-"))

    print("\nEGFR trace entries:")
    for entry in world.board.trace_log():
        if entry.agent == "EGFR":
            print("  t=%d  %-18s consumed=%s produced=%s" % (
                entry.tick, entry.rule, entry.consumed, entry.produced))


if __name__ == "__main__":
    main()
