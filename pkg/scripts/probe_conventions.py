"""Print which sign and normalization variants make each identity hold.

For every identity whose printed form fails, the checks also test the nearby
variants; this script collects those details in one place.
"""

from fractions import Fraction

from gaudin_sov.classical import SystemConfig
from gaudin_sov.quantum import series_checks, separation_checks
from gaudin_sov.reps import CONTRAGREDIENT, TRANSPOSE, VERMA_CASES, levels_reproducing_relations
from gaudin_sov.ringed import check_bracket_identities, lambda_morphism_checks

CFG1 = SystemConfig(1, (0, 1, 2, 3))
CFG2 = SystemConfig(2, (0, 1, 2, 3, 5))


def show(checks, keep):
    for c in checks:
        if any(k in c.name for k in keep):
            print(f"  {c.status:4} {c.name}  {c.detail}")


def main() -> None:
    for cfg in (CFG1, CFG2):
        print(f"genus {cfg.g}, points {[str(a) for a in cfg.a]}")
        show(check_bracket_identities(cfg), ["W-W", "W-U"])
        show(lambda_morphism_checks(cfg), ["sign"])
        show(series_checks(cfg), ["W-U", "W-W", "morphism-sign"])
    print("separation identity, CFG1 with C = (3, 1, 1, 1)")
    show(separation_checks(SystemConfig(1, CFG1.a, tuple(Fraction(c) for c in (3, 1, 1, 1)))), ["separation"])
    print("levels k in [-8, 8] reproducing the moment relations on truncated Verma gamma spaces")
    for g, cfg in ((1, CFG1), (2, CFG2)):
        for weights, depth in VERMA_CASES[g]:
            for dual in (CONTRAGREDIENT, TRANSPOSE):
                levels = levels_reproducing_relations(cfg, weights, range(-8, 9), dual, depth)
                print(f"  g={g} weights={[str(w) for w in weights]} {dual}: {levels}")


if __name__ == "__main__":
    main()
