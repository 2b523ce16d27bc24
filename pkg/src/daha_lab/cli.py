"""``daha-lab`` command line.

Every subcommand builds a JSON report (``"schema": 1``), writes it to
``--emit`` (or stdout) and exits 0 if all selected checks pass, 1 if some
fail and 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA = 1
CACHE_ENV = "DAHA_LAB_CACHE"


class ConfigError(ValueError):
    pass


@dataclass
class QMode:
    kind: str  # formal | root | numeric
    N: int | None = None
    value: complex | None = None

    def describe(self) -> str:
        if self.kind == "formal":
            return "formal"
        if self.kind == "root":
            return f"root:{self.N}"
        return f"num:{self.value.real!r},{self.value.imag!r}"


def parse_q(text: str) -> QMode:
    if text == "formal":
        return QMode("formal")
    if text.startswith("root:"):
        try:
            N = int(text[5:])
        except ValueError:
            raise ConfigError(f"bad root of unity {text!r}")
        if N < 2:
            raise ConfigError("root:N needs N >= 2")
        return QMode("root", N=N)
    if text.startswith("num:"):
        try:
            re_, im = (float(x) for x in text[4:].split(","))
        except ValueError:
            raise ConfigError(f"bad numeric q {text!r}; expected num:re,im")
        return QMode("numeric", value=complex(re_, im))
    raise ConfigError(f"unknown q mode {text!r}")


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    system: str = "A1"
    N: int | None = None
    k: Fraction | None = None
    m: int | None = None
    q: QMode = field(default_factory=lambda: QMode("formal"))
    order: int | None = None
    tol: float | None = None
    seed: int = 0
    emit: str | None = None
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("--tol must be positive")
        if self.tol is not None and self.q.kind == "formal" and self.command in ("verlinde", "identities") \
                and self.extra.get("q_given"):
            raise ConfigError("formal q does not take a tolerance")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.order is not None and not 0 < self.order <= 200:
            raise ConfigError("--order must lie in 1..200")
        if self.N is not None and self.N < 2:
            raise ConfigError("--N must be at least 2")

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "action": self.action,
            "system": self.system,
            "N": self.N,
            "k": None if self.k is None else str(self.k),
            "m": self.m,
            "q": self.q.describe(),
            "order": self.order,
            "tol": self.tol,
            "seed": self.seed,
            **{k: v for k, v in self.extra.items() if k != "q_given"},
        }


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def _all_true(x) -> bool:
    if isinstance(x, dict):
        return all(_all_true(v) for v in x.values())
    if isinstance(x, list):
        return all(_all_true(v) for v in x)
    return bool(x) if isinstance(x, bool) else True


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


# --------------------------------------------------------------------------
# subcommands; each returns (passed, results)
# --------------------------------------------------------------------------

def cmd_daha(cfg: RunConfig):
    from . import acceptance
    from .daha import macdonald

    action = cfg.action or "relations"
    if action == "relations":
        if cfg.system != "A1":
            return _daha_relations_general(cfg.system)
        ok, details = acceptance.criterion_1(seed=cfg.seed)
        return ok, details
    if action == "psl2":
        return acceptance.criterion_2()
    if action == "macdonald":
        m = cfg.m if cfg.m is not None else 3
        ok, details = acceptance.criterion_3(max_b=m, max_dual=min(m, 4))
        polys = {str(b): [[list(e), c.to_json()] for e, c in sorted(macdonald(b).items())] for b in range(-m, m + 1)}
        return ok, {"checks": details, "epsilon": polys}
    raise ConfigError(f"unknown daha action {action!r}")


def _daha_relations_general(system: str):
    from itertools import product

    from .daha import PolyRep
    from .laurent import LaurentPoly
    from .rootdata import root_system
    from .scalars import ONE

    R = root_system(system)
    rep = PolyRep(R)
    monos = [LaurentPoly.monomial(b, ONE) for b in product(range(-1, 2), repeat=R.rank)]
    quad = all(rep.T(i, rep.T(i, f)) == rep.T(i, f).scale(rep.c) + f for i in range(R.rank + 1) for f in monos)
    comm = all(rep.Y_fund(i, rep.Y_fund(j, f)) == rep.Y_fund(j, rep.Y_fund(i, f))
               for i in range(1, R.rank + 1) for j in range(i + 1, R.rank + 1) for f in monos)
    res = {"quadratic relations on monomials": quad, "Y operators commute": comm}
    return quad and comm, res


def cmd_verlinde(cfg: RunConfig):
    from . import verlinde as V

    if cfg.action == "classify":
        if cfg.N is None or cfg.k is None:
            raise ConfigError("classify needs --N and --k")
        r = V.classify(cfg.N, cfg.k, seed=cfg.seed)
        return r.passed, r.to_json()
    if cfg.m is not None:
        if cfg.q.kind == "formal":
            M = V.build_deformed(cfg.m)
        elif cfg.q.kind == "root":
            if cfg.q.N % 2 == 0:
                raise ConfigError("the deformed module at a root of unity needs odd N")
            M = V.build_deformed(cfg.m, V.little_root_field(cfg.q.N))
        else:
            raise ConfigError("the deformed module takes --q formal or root:N")
    else:
        if cfg.N is None or cfg.k is None:
            raise ConfigError("verlinde needs --N and --k (or --m)")
        try:
            M = V.build_verlinde(cfg.N, cfg.k)
        except V.ModuleError as exc:
            raise ConfigError(str(exc))
    checks = {"relations": M.relations()}
    F = None
    if cfg.m is not None or cfg.k != 0:
        try:
            F = V.gaussian_and_sigma(M)
        except V.ModuleError as exc:
            checks["fourier"] = {str(exc): False}
        else:
            checks["fourier"] = F.checks
            checks["axioms"] = V.verlinde_axioms(M, F)
    info = {}
    if cfg.m is None:
        if cfg.k:
            checks["forbidden coefficients vanish"] = V.forbidden_point_check(cfg.N, cfg.k)
        unitary = V.unitary_structure(M).positive
        if cfg.k.denominator == 1 and cfg.k:
            checks["dim = 2N-4k"] = M.dim == 2 * cfg.N - 4 * cfg.k
            checks["unitary weights positive"] = unitary
        else:
            info["unitary weights positive"] = unitary
    results = {
        "info": info,
        "dims": {"V": M.dim, "Vsym": M.sym_dim()},
        "checks": checks,
        "module": M.to_json(),
        "gauss_constant": None if F is None else _jsonable(F.gauss_constant),
    }
    return _all_true(checks), results


def cmd_degenerate(cfg: RunConfig):
    from . import degenerate as dg

    want = cfg.action or "all"
    R = cfg.system
    res: dict = {}
    sel = (lambda name: want in ("all", name))
    if sel("trig"):
        td = dg.TrigDunkl(R)
        res["trig"] = {"commutative": td.check_commutative(3), "cross relations": td.check_cross_relations(3)}
    if sel("rational"):
        rd = dg.RatDunkl(R)
        res["rational"] = {"commutative": rd.check_commutative(3), "cross relations": rd.check_cross(5),
                           "equivariance": rd.check_equivariance(3)}
        if R == "A1":
            res["rational"]["rank-1 bracket"] = dg.rank1_bracket_check()
    if sel("spectral"):
        sp = dg.SpectralOps(R)
        res["spectral"] = {"relations": sp.check_polynomial_and_relations(2 if R == "A3" else 3),
                           "lambda": sp.check_lambda(3)}
    if sel("sl2") and R == "A1":
        m = cfg.m if cfg.m is not None else 6
        res["sl2"] = {str(j): {"checks": r.checks, "dim": r.dim, "sym_dim": r.sym_dim}
                      for j, r in ((j, dg.sl2_structure(j)) for j in range(m + 1))}
    if sel("coinvariants") and R in ("A1", "A2", "B2"):
        res["coinvariants"] = dg.diag_coinvariants(R).to_json()
        if R == "A1":
            res["coinvariants"]["perfect module gr (m=1)"] = dg.perfect_module_filtration(1)
    if sel("lusztig"):
        L = dg.LusztigMap(R, cfg.order or 6)
        res["lusztig"] = {"relations": L.check_relations(2), "matches trig": L.check_against_trig(2)}
        if R == "A1":
            res["lusztig"]["one-step limit"] = dg.one_step_limit_rank1()
    if not res:
        raise ConfigError(f"nothing to check for {want!r} on {R}")
    return _all_true(res), res


def cmd_padic(cfg: RunConfig):
    from . import padic as P

    want = cfg.action or "all"
    L = cfg.extra.get("ball") or 12
    res: dict = {}
    sel = (lambda name: want in ("all", name))
    if sel("relations"):
        _, rep = P.deformed_regular(L)
        res["relations"] = {"deformed": rep.to_json(), "spherical": P.spherical_module(min(L, 10)).to_json(),
                            "matsumoto": P.matsumoto_recursion_check(10)}
    if sel("limit"):
        res["limit"] = P.limit_check(L).to_json()
    if sel("plancherel"):
        q = 0.5
        if cfg.q.kind == "numeric":
            if abs(cfg.q.value.imag) > 0 or not 0 < cfg.q.value.real < 1:
                raise ConfigError("plancherel needs real 0 < q < 1")
            q = cfg.q.value.real
        k = float(cfg.k) if cfg.k is not None else 1.0
        tol = cfg.tol or 1e-8
        res["plancherel"] = {
            "numeric": P.fourier_numeric(q, k, L=40, seed=cfg.seed, tol=tol).to_json(),
            "roots": [P.fourier_root(N, kk, seed=cfg.seed).to_json() for N, kk in ((5, 1), (7, 2))],
        }
    if not res:
        raise ConfigError(f"unknown padic check {want!r}")
    ok = True
    if "relations" in res:
        blob = res["relations"]
        ok = blob["deformed"]["passed"] and blob["spherical"]["passed"] and _all_true(blob["matsumoto"])
    if "limit" in res:
        ok = ok and res["limit"]["passed"]
    if "plancherel" in res:
        ok = ok and res["plancherel"]["numeric"]["passed"] and all(r["passed"] for r in res["plancherel"]["roots"])
    return ok, res


def cmd_identities(cfg: RunConfig):
    from . import identities as I

    suite = cfg.extra.get("suite") or "all"
    if suite == "noncyclotomic":
        m = cfg.m if cfg.m is not None else 3
        if cfg.q.kind == "numeric":
            case = I.noncyclotomic_gauss(m, cfg.q.value, tol=cfg.tol or 1e-10)
        elif cfg.q.kind == "formal":
            case = I.noncyclotomic_gauss(m)
        else:
            raise ConfigError("noncyclotomic takes --q formal or num:re,im")
        recs = [case.to_json()]
    else:
        try:
            recs = I.run_suite(suite, order=cfg.order or 120, N=cfg.N, jobs=cfg.jobs)
        except ValueError as exc:
            raise ConfigError(str(exc))
    return all(r["verdict"] == "pass" for r in recs), {"cases": recs}


def cmd_verify_all(cfg: RunConfig):
    from . import acceptance

    budget = cfg.extra.get("budget")
    numbers = cfg.extra.get("criteria") or None
    results = acceptance.run_all(numbers, budget=budget, echo=lambda s: print(s, file=sys.stderr))
    recs = [{"criterion": r.number, "title": r.title, "passed": r.passed, "within_limit": r.ok,
             "limit_seconds": r.limit, "details": _jsonable(r.details)} for r in results]
    return all(r.ok for r in results), {"criteria": recs}


COMMANDS = {
    "daha": cmd_daha,
    "verlinde": cmd_verlinde,
    "degenerate": cmd_degenerate,
    "padic": cmd_padic,
    "identities": cmd_identities,
    "verify-all": cmd_verify_all,
}


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", default="A1", help="root system label (A1, A2, B2, ...)")
    p.add_argument("--N", type=int)
    p.add_argument("--k", type=Fraction)
    p.add_argument("--m", type=int)
    p.add_argument("--q", default=None, help="formal | root:N | num:re,im")
    p.add_argument("--order", type=int, help="truncation order in units of q^(1/4)")
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit", help="write the JSON report here")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="daha-lab", description="Exact DAHA computations and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("daha", help="rank-one relations, PSL(2,Z), Macdonald polynomials")
    p.add_argument("action", nargs="?", choices=["relations", "psl2", "macdonald"], default="relations")
    p.add_argument("--rank1", action="store_true", help="shorthand for --system A1")
    _common(p)

    p = sub.add_parser("verlinde", help="Verlinde and deformed modules")
    p.add_argument("action", nargs="?", choices=["module", "classify"], default="module")
    _common(p)

    p = sub.add_parser("degenerate", help="Dunkl operators, sl(2), coinvariants, Lusztig maps")
    p.add_argument("--check", default="all",
                   choices=["all", "trig", "rational", "spectral", "sl2", "coinvariants", "lusztig"])
    _common(p)

    p = sub.add_parser("padic", help="affine Hecke modules, limits, Plancherel")
    p.add_argument("--check", default="all", choices=["all", "relations", "limit", "plancherel"])
    p.add_argument("--ball", type=int, default=12, help="word-length radius L")
    _common(p)

    p = sub.add_parser("identities", help="closed-form sums and series")
    p.add_argument("--suite", default="all", choices=["all", "gauss", "series", "noncyclotomic"])
    _common(p)

    p = sub.add_parser("verify-all", help="run the acceptance criteria")
    p.add_argument("--budget", type=float, help="overall time budget in seconds")
    p.add_argument("--criteria", type=int, nargs="*", help="subset of criterion numbers")
    _common(p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    extra: dict = {}
    action = getattr(ns, "action", None)
    if ns.command in ("degenerate", "padic"):
        action = ns.check
    if ns.command == "padic":
        extra["ball"] = ns.ball
    if ns.command == "identities":
        extra["suite"] = ns.suite
    if ns.command == "verify-all":
        extra["budget"] = ns.budget
        extra["criteria"] = ns.criteria
    system = ns.system
    if getattr(ns, "rank1", False):
        system = "A1"
    q = parse_q(ns.q) if ns.q else QMode("formal")
    extra["q_given"] = ns.q is not None
    cfg = RunConfig(ns.command, action, system, ns.N, ns.k, ns.m, q, ns.order, ns.tol, ns.seed, ns.emit,
                    ns.jobs, extra)
    cfg.validate()
    return cfg


def run(cfg: RunConfig) -> tuple[int, dict]:
    passed, results = COMMANDS[cfg.command](cfg)
    report = {"schema": SCHEMA, "config": cfg.to_json(), "passed": bool(passed), "results": _jsonable(results)}
    return (0 if passed else 1), report


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cache = os.environ.get(CACHE_ENV)
    try:
        cfg = config_from_args(ns)
        if cache:
            from .daha import load_cache

            load_cache(cache)
        status, report = run(cfg)
    except ConfigError as exc:
        print(f"daha-lab: configuration error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=1)
    if cfg.emit:
        with open(cfg.emit, "w") as fh:
            fh.write(text + "\n")
        print(f"{cfg.command}: {'pass' if status == 0 else 'FAIL'} (report: {cfg.emit})")
    else:
        print(text)
    if cache:
        from .daha import save_cache

        save_cache(cache)
    return status


if __name__ == "__main__":
    sys.exit(main())
