"""Run the full EGFR/MAPK cascade and summarize what happened.

Shows when each wave of the pathway first becomes active, the level-by-tick
activity map, and the deepest agency columns extracted from the trace.
"""

from cellulat import Experiment, bundled_mapk, run_experiment
from cellulat.pathway import Dose

WATCH = ["PLCg", "PI3K", "Grb2", "Shc", "Sos", "Ras", "Raf", "MEK",
         "ERK1", "ERK2", "RSK", "Elk1", "cFos", "AP1"]


def main():
    pathway = bundled_mapk()
    results = run_experiment(Experiment(
        pathway=pathway, doses=[Dose(0, "EGF", 2.0, "membrane")], n_ticks=120))

    print("first activation tick (EGF dosed at tick 0):")
    for agent in WATCH:
        series = results.concentration_series[agent]["aac"]
        first = next((t for t, v in enumerate(series) if v > 0), None)
        final = series[-1]
        print("  %-6s tick %-4s final AAC %7.3f nM" % (agent, first, final))

    print("\nactivity map (firings per level, every 10th tick):")
    grid = results.activity_map
    print("  tick:      " + "".join("%6d" % t for t in results.ticks[::10]))
    for row, level in enumerate(results.levels):
        counts = grid[row, ::10]
        print("  %-12s" % level + "".join("%6d" % c for c in counts))

    columns = results.columns
    deepest = max(len(c.levels_crossed) for c in columns)
    print("\n%d agency columns; deepest crosses %d levels" % (len(columns), deepest))
    example = next(c for c in columns if len(c.levels_crossed) == deepest)
    print("example column:")
    for entry in example.entries[:10]:
        print("  t=%-3d %-22s span=%s" % (entry.tick, entry.rule, entry.level_span))


if __name__ == "__main__":
    main()
