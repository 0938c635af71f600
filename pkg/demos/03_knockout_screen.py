"""In-silico knockout screen over a few pivotal agents.

For each knockout the run is compared against the untouched baseline and
against the static reachability oracle, mimicking a wet-lab perturbation
series.
"""

from cellulat import (
    Experiment,
    bundled_mapk,
    compare,
    reachability_oracle,
    run_experiment,
)
from cellulat.pathway import Dose

VICTIMS = ["Grb2", "Ras", "Raf", "MEK", "PLCg", "EGFR"]


def main():
    pathway = bundled_mapk()
    doses = [Dose(0, "EGF", 2.0, "membrane")]
    baseline = run_experiment(Experiment(pathway=pathway, doses=doses, n_ticks=200))
    print("baseline: %d of %d agents became active\n"
          % (len(baseline.ever_active()), len(pathway.agents)))

    for victim in VICTIMS:
        perturbed = run_experiment(Experiment(
            pathway=pathway, knockouts=[victim], doses=doses, n_ticks=200))
        active = perturbed.ever_active()
        allowed = reachability_oracle(pathway, knockouts=[victim])
        report = compare(baseline, perturbed)
        print("knockout %-5s active=%-2d silenced=%-2d (oracle allows %d)"
              % (victim, len(active), len(report.silenced), len(allowed)))
        assert active <= allowed, "simulator escaped the reachability oracle!"
        sample = sorted(report.silenced)[:8]
        if sample:
            print("          silenced: %s%s" % (
                ", ".join(sample), " ..." if len(report.silenced) > 8 else ""))


if __name__ == "__main__":
    main()
