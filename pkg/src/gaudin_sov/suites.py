"""Named verification suites and the configuration they run under."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .classical import (
    ConfigError,
    SeparatedPoint,
    SystemConfig,
    alpha,
    beta,
    beta_symbolic,
    bm_hamiltonians,
    bm_involutivity,
    bm_ring,
    check_diagram,
    eta,
    eta_symbolic,
    evaluate_bm,
    evaluate_hitchin,
    gamma_act,
    hitchin_hamiltonians,
    hitchin_involutivity,
    random_rational,
    random_separated_point,
)
from .kernel import ratfunc_eq
from .quantum import (
    QuantumAlgebras,
    bm_checks,
    casimir_checks,
    hitchin_checks,
    quantum_bm,
    series_checks,
    separation_checks,
    symbol_checks,
)
from .report import Check, SuiteReport
from .reps import VERMA_CASES, rep_checks, verma_checks
from .ringed import (
    check_bracket_identities,
    e_ring,
    gauge_shift,
    k_ring,
    lambda0,
    lambda1,
    lambda_inv,
    lambda_morphism_checks,
    normalizer_checks,
    correspondence_checks,
    prop_a_checks,
    y_phi,
)

WORKED_POINTS = (Fraction(0), Fraction(1), Fraction(2), Fraction(3))


@dataclass
class RunConfig:
    genus: int = 1
    points: tuple[Fraction, ...] | None = None
    casimirs: tuple[Fraction, ...] | None = None
    seed: int = 0
    trials: int = 25
    mode: str = "exact"
    suites: list[str] = field(default_factory=lambda: ["all"])

    def system(self) -> SystemConfig:
        points = self.points
        if points is None:
            rng = random.Random(self.seed)
            points = tuple(Fraction(x) for x in sorted(rng.sample(range(-6, 10), self.genus + 3)))
        return SystemConfig(self.genus, points, self.casimirs)

    def echo(self, cfg: SystemConfig) -> dict:
        return {
            "genus": cfg.g,
            "points": [str(a) for a in cfg.a],
            "casimirs": None if cfg.casimirs is None else [str(c) for c in cfg.casimirs],
            "seed": self.seed,
            "trials": self.trials,
            "mode": self.mode,
        }


def _timed(name: str, fn: Callable[[], tuple[bool, str | None, dict]]) -> Check:
    t0 = time.perf_counter()
    ok, witness, detail = fn()
    return Check(name, "pass" if ok else "fail", witness, (time.perf_counter() - t0) * 1000, detail)


def _is_zero(r, run: RunConfig) -> bool:
    if run.mode == "exact":
        return r.is_zero()
    return ratfunc_eq(r, r.ring.zero(), "probabilistic", trials=3, seed=run.seed)


def default_casimirs(cfg: SystemConfig) -> tuple[Fraction, ...]:
    """A Casimir vector with sum C = sum a C: ones except at one point a_i != 1,
    whose value is solved from the linear condition."""
    for i, ai in enumerate(cfg.a):
        if ai != 1:
            rest = sum((aj - 1 for j, aj in enumerate(cfg.a) if j != i), Fraction(0))
            ci = rest / (1 - ai)
            return tuple(ci if j == i else Fraction(1) for j in range(cfg.n))
    raise ConfigError("no admissible Casimir vector")


# ------------------------------------------------------------- classical


def classical_diagram(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    rng = random.Random(run.seed)
    pts = [random_separated_point(cfg, rng) for _ in range(run.trials)]
    checks = []

    def round_trip():
        bad = [p for p in pts if alpha(cfg, beta(cfg, p)) != p]
        return not bad, None if not bad else str(bad[0]), {"samples": len(pts)}

    def constraints():
        for p in pts:
            t = beta(cfg, p)
            v = t.violations(cfg)
            norm = sum((a * a * u for a, u in zip(cfg.a, t.u)), Fraction(0))
            if v or norm != 1:
                return False, f"{p}: {v} sum a^2 u = {norm}", {}
        return True, None, {"samples": len(pts)}

    def orbit():
        for p in pts:
            t = beta(cfg, p)
            if beta(cfg, alpha(cfg, t)) != t:
                return False, str(p), {}
            a, b, c = (random_rational(rng) or Fraction(1) for _ in range(3))
            if alpha(cfg, gamma_act(cfg, t, a, b, c)) != p:
                return False, f"gauge action changed alpha at {p}", {}
        return True, None, {"samples": len(pts)}

    def diagram_points():
        bad = [p for p in pts if not check_diagram(cfg, p)]
        return not bad, None if not bad else str(bad[0]), {"samples": len(pts)}

    def diagram_symbolic():
        if cfg.g > 2:
            return True, None, {"skipped_for_genus": cfg.g}
        u, v = beta_symbolic(cfg)
        ring = u[0].ring
        hams = hitchin_hamiltonians(cfg)
        sub = {**dict(zip(cfg.us(), u)), **dict(zip(cfg.vs(), v))}
        hh = [h.subs(sub, ring=ring) for h in hams]
        lhs = eta_symbolic(cfg, hh)
        rhs = [h.to_ring(ring) for h in bm_hamiltonians(cfg)]
        for k, (l, r) in enumerate(zip(lhs, rhs)):
            if not _is_zero(l - r, run):
                return False, f"component {k + 1}: {l - r}", {}
        return True, None, {}

    def spectral_identities():
        # sum u/(X - a) = (sum a^2 u) prod(X - x)/Pi(X), and the y-tilde identity for v
        u, v = beta_symbolic(cfg, ("X",))
        ring = u[0].ring
        X = ring.var("X")
        xs = [ring.var(n) for n in cfg.xs()]
        ys = [ring.var(n) for n in cfg.ys()]
        prod_x = ring.one()
        for x in xs:
            prod_x = prod_x * (X - x)
        pi = cfg.pi_at(X)
        lhs_u = sum((ui / (X - ai) for ui, ai in zip(u, cfg.a)), ring.zero())
        s2 = sum((ai * ai * ui for ui, ai in zip(u, cfg.a)), ring.zero())
        ytil = ring.zero()
        for al, (x, y) in enumerate(zip(xs, ys)):
            den = ring.one()
            for b, xb in enumerate(xs):
                if b != al:
                    den = den * (x - xb)
            ytil = ytil + y / den / (X - x)
        lhs_v = sum((vi / (X - ai) for vi, ai in zip(v, cfg.a)), ring.zero())
        d1 = lhs_u - s2 * prod_x / pi
        d2 = lhs_v - prod_x / pi * ytil
        ok = d1.is_zero() and d2.is_zero() and s2 == ring.one()
        return ok, None if ok else f"u: {d1}; v: {d2}; sum a^2 u = {s2}", {}

    checks.append(_timed("alpha-beta/round-trip", round_trip))
    checks.append(_timed("alpha-beta/beta-lands-on-moment-zero-set", constraints))
    checks.append(_timed("alpha-beta/orbit-consistency-and-gauge-invariance", orbit))
    checks.append(_timed("alpha-beta/spectral-identities-symbolic", spectral_identities))
    checks.append(_timed("diagram/random-points", diagram_points))
    checks.append(_timed("diagram/symbolic", diagram_symbolic))
    if cfg.a == WORKED_POINTS:

        def worked():
            p = SeparatedPoint(((Fraction(3, 2), Fraction(-3, 4)),))
            h = evaluate_hitchin(cfg, beta(cfg, p))
            want = tuple(Fraction(x) for x in ("-1/6", "1/2", "-1/2", "1/6"))
            e = eta(cfg, h)
            bm = evaluate_bm(cfg, p)
            ok = h.h == want and e.h == (1,) and bm.h == (1,)
            return ok, None if ok else f"H={h.h} eta={e.h} bm={bm.h}", {}

        checks.append(_timed("diagram/worked-instance", worked))
    return checks


def classical_involutivity(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    checks = []

    def bm():
        br = bm_involutivity(cfg)
        detail = {"pairs": len(br)}
        if cfg.g >= 3:
            # exact bracket, evaluated at random points
            rng = random.Random(run.seed)
            samples = 10
            for (i, j), b in br.items():
                r = b.to_ratfunc()
                for _ in range(samples):
                    pt = {}
                    for name in r.ring.names:
                        val = Fraction(0)
                        while val == 0:
                            val = random_rational(rng)
                        pt[name] = val
                    try:
                        val = r.evaluate(pt)
                    except ZeroDivisionError:
                        continue
                    if val != 0:
                        return False, f"{{H{i + 1},H{j + 1}}} at {pt} = {val}", detail
            detail["random_points_per_pair"] = samples
        bad = [(i, j) for (i, j), b in br.items() if not b.is_zero()]
        return not bad, None if not bad else f"pairs {bad}", detail

    def hitchin():
        if cfg.g > 2:
            return True, None, {"skipped_for_genus": cfg.g}
        br = hitchin_involutivity(cfg)
        bad = [(i + 1, j + 1) for (i, j), b in br.items() if not _is_zero(b, run)]
        return not bad, None if not bad else f"pairs {bad}", {"pairs": len(br)}

    checks.append(_timed("involutivity/beauville-mukai", bm))
    checks.append(_timed("involutivity/gaudin-on-constraint-surface", hitchin))
    return checks


def lambda_suite(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    checks = check_bracket_identities(cfg) + lambda_morphism_checks(cfg) + normalizer_checks(cfg)
    checks += prop_a_checks(cfg)

    def inverse_round_trip():
        er = e_ring(cfg)
        kr = k_ring(cfg)
        from .ringed import RingedElement, k_to_x
        from .classical import elementary

        xr = None
        for k in range(1, cfg.g + 1):
            img = lambda0(cfg, er.var(f"e{k}"))
            _, zero = lambda_inv(cfg, RingedElement("U", img, [kr.zero()] * cfg.n))
            xr = zero.algebra.ring
            back = k_to_x(cfg, img, xr)
            want = elementary([xr.var(n) for n in cfg.xs()], k)
            if back != want:
                return False, f"e{k}: {back} != {want}", {}
        for phi in ([1], [0, 1], [2, 0, 1]):
            w = lambda1(cfg, phi)
            if not w.lambda_constraints_hold(cfg):
                return False, f"W[{phi}] violates the lambda constraints", {}
            _, y = lambda_inv(cfg, w)
            d = y - y_phi(cfg, phi)
            if not d.is_zero():
                return False, f"phi={phi}: {d}", {}
            _, y2 = lambda_inv(cfg, gauge_shift(cfg, w, kr.var("ub1")))
            if not (y2 - y).is_zero():
                return False, f"gauge shift changes the image of W[{phi}]", {}
        return True, None, {}

    checks.append(_timed("lambda/inverse-round-trip-and-gauge", inverse_round_trip))
    return checks


def correspondence_suite(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    return correspondence_checks(cfg)


# --------------------------------------------------------------- quantum


def _quantum(cfg: SystemConfig) -> QuantumAlgebras:
    # without configured values the Casimirs stay symbolic, which is stronger
    return QuantumAlgebras(cfg, (), cfg.casimirs is None)


def quantum_algebra_suite(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    return casimir_checks(_quantum(cfg))


def quantum_series_suite(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    return series_checks(cfg)


def gaudin_suite(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    q = _quantum(cfg)
    checks = hitchin_checks(q) + symbol_checks(q, run.seed) + bm_checks(q)
    if cfg.g >= 2:

        def pi_variant():
            H = quantum_bm(q, pi_power=1)
            from .opalgebra import commutator

            ok = all(commutator(H[i], H[j]).is_zero() for i in range(len(H)) for j in range(i + 1, len(H)))
            return True, None, {"pi_convention_commutes": ok}

        checks.append(_timed("beauville-mukai-quantum/pi-convention-report", pi_variant))
    return checks


def sov_suite(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    return separation_checks(cfg)


def reps_suite(cfg: SystemConfig, run: RunConfig) -> list[Check]:
    n = cfg.n
    weights = [(1,) * n, (2,) + (1,) * (n - 2) + (2,)]
    checks = []
    for w in weights:
        checks += rep_checks(cfg, w)
    checks += verma_checks(cfg)
    return checks


SUITES: dict[str, Callable[[SystemConfig, RunConfig], list[Check]]] = {
    "classical-diagram": classical_diagram,
    "classical-involutivity": classical_involutivity,
    "lambda": lambda_suite,
    "hamiltonian-correspondence": correspondence_suite,
    "quantum-algebra": quantum_algebra_suite,
    "quantum-series": quantum_series_suite,
    "gaudin": gaudin_suite,
    "sov": sov_suite,
    "reps": reps_suite,
}


def resolve_suites(names: list[str]) -> list[str]:
    out = []
    for name in names:
        if name == "all":
            out.extend(s for s in SUITES if s not in out)
        elif name in SUITES:
            if name not in out:
                out.append(name)
        else:
            raise ConfigError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return out


def prepare(run: RunConfig) -> tuple[SystemConfig, list[str]]:
    """Validate the run and fill in defaults; raises ConfigError on bad input."""
    if run.genus not in (1, 2, 3):
        raise ConfigError("genus must be 1, 2 or 3")
    if run.mode not in ("exact", "probabilistic"):
        raise ConfigError(f"unknown mode {run.mode!r}")
    if run.trials < 1:
        raise ConfigError("trials must be positive")
    names = resolve_suites(run.suites)
    cfg = run.system()
    if "sov" in names:
        if cfg.casimirs is None:
            cfg = SystemConfig(cfg.g, cfg.points, default_casimirs(cfg))
        elif not cfg.casimir_hypothesis():
            raise ConfigError("the separation suite needs Casimirs with sum C = sum a C")
    return cfg, names


def run_suites(run: RunConfig) -> list[SuiteReport]:
    cfg, names = prepare(run)
    reports = []
    for name in names:
        checks = SUITES[name](cfg, run)
        reports.append(SuiteReport(name, run.echo(cfg), checks))
    return reports
