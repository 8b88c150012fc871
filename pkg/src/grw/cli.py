"""Command line front end: decompose, structure, census, verify, selftest.

Exit codes: 0 on success, 1 when a verification finds a mismatch, 2 on
invalid input (including cases no theorem covers).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import decomp, oracle, selftest, unitstruct
from .errors import GRWError, SizeBound, UnsupportedCase
from .ffield import is_prime

FAMILY_NAMES = {"q12": "Q12", "d12": "D12", "c4": "C4", "c2xc2": "C2xC2", "cyclic": "Trivial"}
EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


def _int(text: str) -> int:
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grw", description="Unit groups of F(C_n x Q12) and F(C_n x D12).",
                                 allow_abbrev=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, family=True):
        if family:
            sp.add_argument("--family", required=True, choices=sorted(FAMILY_NAMES))
            sp.add_argument("--p", type=_int, required=True)
            sp.add_argument("--k", type=_int, default=1)
            sp.add_argument("--n", type=_int, default=1)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--seed", type=_int, default=oracle.DEFAULT_SEED)
        sp.add_argument("--timings", action="store_true", help="include wall-clock times in JSON")

    for name, hlp in [("decompose", "Wedderburn decomposition of the semisimple quotient"),
                      ("structure", "predicted unit group structure")]:
        common(sub.add_parser(name, help=hlp, allow_abbrev=False))
    for name, hlp in [("census", "brute-force unit count"), ("verify", "structure vs census vs subgroups vs radical")]:
        sp = sub.add_parser(name, help=hlp, allow_abbrev=False)
        common(sp)
        sp.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
        sp.add_argument("--samples", type=_int, default=oracle.DEFAULT_SAMPLES)
        sp.add_argument("--cap", type=_int, default=oracle.DEFAULT_CAP)
    sp = sub.add_parser("selftest", help="invariant suites", allow_abbrev=False)
    common(sp, family=False)
    sp.add_argument("--golden-dir", help="compare against (or write) golden files here")
    sp.add_argument("--write-golden", action="store_true")
    return ap


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    p: int | None = None
    k: int = 1
    n: int = 1
    mode: str = "auto"
    samples: int = oracle.DEFAULT_SAMPLES
    seed: int = oracle.DEFAULT_SEED
    cap: int = oracle.DEFAULT_CAP
    format: str = "text"
    timings: bool = False
    golden_dir: str | None = None
    write_golden: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        kw = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        if kw.get("family"):
            kw["family"] = FAMILY_NAMES[kw["family"]]
        return cls(**kw)

    def validate(self):
        if self.family is not None:
            if not is_prime(self.p):
                raise GRWError(f"--p {self.p} is not prime")
            if self.k < 1 or self.n < 1:
                raise GRWError("--k and --n must be positive")
        if self.samples < 1000:
            raise GRWError("--samples must be at least 1000")
        if self.cap < 1:
            raise GRWError("--cap must be positive")


@dataclass
class Report:
    command: str
    data: dict
    lines: list[str] = field(default_factory=list)
    ok: bool = True

    def emit(self, fmt: str, out=sys.stdout):
        if fmt == "json":
            out.write(json.dumps(self.data, indent=2, sort_keys=True, default=str) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


# -- subcommands ------------------------------------------------------------------------

def _case(cfg: RunConfig) -> dict:
    return {"family": cfg.family, "p": cfg.p, "k": cfg.k, "n": cfg.n}


def cmd_decompose(cfg: RunConfig) -> Report:
    q = cfg.p**cfg.k
    if cfg.family in ("Q12", "D12"):
        dec = decomp.product_decompose(cfg.family, cfg.p, cfg.k, cfg.n)
    elif cfg.family == "Trivial":
        dec = decomp.cyclic_decompose(cfg.n, q)
    elif cfg.family == "C4" and cfg.n == 1:
        dec = decomp.fc4_decompose(q)
    else:
        raise UnsupportedCase(f"no decomposition for family {cfg.family} with n = {cfg.n}")
    line = f"{dec.algebra} over GF({q}) = {dec.render()}, radical_dim {dec.radical_dim}"
    return Report("decompose", {"case": _case(cfg), "decomposition": dec.to_json()}, [line])


def _structure(cfg: RunConfig) -> unitstruct.UnitStructure:
    return unitstruct.unit_structure(cfg.family, cfg.p, cfg.k, cfg.n)


def _structure_json(us: unitstruct.UnitStructure) -> dict:
    ev = unitstruct.descriptor_eval(us.descriptor)
    out = {
        "descriptor": unitstruct.to_json(us.descriptor),
        "text": us.render(),
        "descriptor_order": ev.order,
        "exponent": ev.exponent,
        "abelian": ev.is_abelian,
        "order": us.order,
    }
    if us.v_part:
        out["v_part"] = {"order": us.v_part.order, "exponent": us.v_part.exponent}
    return out


def _structure_line(us: unitstruct.UnitStructure) -> str:
    ev = unitstruct.descriptor_eval(us.descriptor)
    text = us.render()
    if us.v_part:
        text = f"V |x ({text}), |V| = {us.v_part.order}, exponent(V) = {us.v_part.exponent}"
    line = f"{text}, order {us.order}"
    if ev.exponent is not None and not us.v_part:
        line += f", exponent {ev.exponent}"
    return line


def cmd_structure(cfg: RunConfig) -> Report:
    us = _structure(cfg)
    return Report("structure", {"case": _case(cfg), "structure": _structure_json(us)}, [_structure_line(us)])


def _census_mode(cfg: RunConfig, fp_dim: int) -> str:
    if cfg.mode != "auto":
        return cfg.mode
    return "exhaustive" if cfg.p**fp_dim <= cfg.cap else "sampled"


def _fp_dim(cfg: RunConfig) -> int:
    base = {"Q12": 12, "D12": 12, "C4": 4, "C2xC2": 4, "Trivial": 1}[cfg.family]
    return base * cfg.n * cfg.k


def cmd_census(cfg: RunConfig) -> Report:
    mode = _census_mode(cfg, _fp_dim(cfg))
    c = oracle.count_units(cfg.p, cfg.k, cfg.family, cfg.n, mode, samples=cfg.samples, seed=cfg.seed, cap=cfg.cap)
    if mode == "exhaustive":
        line = f"{c.unit_count} units of {c.total}"
    else:
        line = (f"unit fraction {c.estimated_fraction:.6f} +- {c.std_error:.6f} "
                f"({c.hits} of {c.samples} samples, seed {c.seed:#x})")
    return Report("census", {"case": _case(cfg), "census": c.to_json(cfg.timings)}, [line])


def _check(report: Report, name: str, passed: bool, detail: dict, start: float, timings: bool):
    entry = {"check": name, "pass": bool(passed), **detail}
    if timings:
        entry["elapsed"] = round(time.perf_counter() - start, 4)
    report.data["checks"].append(entry)
    report.lines.append(f"[{'PASS' if passed else 'FAIL'}] {name}: "
                        + ", ".join(f"{k}={v}" for k, v in detail.items()
                                    if k != "witness" and not isinstance(v, (dict, list))))
    if not passed and "witness" in detail:
        report.lines.append(f"       witness: {detail['witness']}")
    report.ok &= bool(passed)


def cmd_verify(cfg: RunConfig) -> Report:
    rep = Report("verify", {"case": _case(cfg), "checks": []})
    us = _structure(cfg)
    rep.data["structure"] = _structure_json(us)
    rep.lines.append("predicted: " + _structure_line(us))
    fam, p, k, n = cfg.family, cfg.p, cfg.k, cfg.n

    t = time.perf_counter()
    mode = _census_mode(cfg, _fp_dim(cfg))
    if mode == "exhaustive":
        c = oracle.count_units(p, k, fam, n, "exhaustive", cap=cfg.cap)
        _check(rep, "census", c.unit_count == us.order,
               {"mode": "exhaustive", "unit_count": c.unit_count, "predicted": us.order}, t, cfg.timings)
    else:
        fc = oracle.check_fraction(p, k, fam, n, us.order, samples=cfg.samples, seed=cfg.seed)
        last = fc.censuses[-1]
        _check(rep, "census", fc.passed,
               {"mode": "sampled", "fraction": round(last.estimated_fraction, 6),
                "predicted_fraction": us.order / last.total, "z": round(fc.z_scores[-1], 3),
                "runs": len(fc.censuses), "seed": last.seed}, t, cfg.timings)

    if fam in ("Q12", "D12") and p == 3:
        t = time.perf_counter()
        v = oracle.v_subgroup(fam, k, n, seed=cfg.seed)
        _check(rep, "V", v.ok and v.exponent == 3, v.to_json(), t, cfg.timings)
        t = time.perf_counter()
        cv = oracle.cv_subgroup(fam, k, n, seed=cfg.seed)
        _check(rep, "C_V", cv.ok, cv.to_json(), t, cfg.timings)
        t = time.perf_counter()
        try:
            ps = oracle.proof_subgroups(fam, k, n, seed=cfg.seed)
            _check(rep, "proof_subgroups", ps.ok, ps.to_json(), t, cfg.timings)
        except SizeBound as exc:
            rep.lines.append(f"[SKIP] proof_subgroups: {exc}")
    if fam in ("Q12", "D12") and p >= 3:
        t = time.perf_counter()
        rv = oracle.radical_verify(p, k, fam, n)
        _check(rep, "radical", rv.ok, rv.to_json(), t, cfg.timings)
        t = time.perf_counter()
        sp = oracle.verify_split(p, k, fam, n, seed=cfg.seed)
        _check(rep, "split", sp.ok, sp.to_json(), t, cfg.timings)
    rep.data["pass"] = rep.ok
    rep.lines.append("verify: " + ("PASS" if rep.ok else "FAIL"))
    return rep


def cmd_selftest(cfg: RunConfig) -> Report:
    results = selftest.run_suites(cfg.seed)
    if cfg.golden_dir:
        results.append(selftest.compare_golden(cfg.golden_dir, write=cfg.write_golden))
    rep = Report("selftest", {"suites": [r.to_json() for r in results]})
    for r in results:
        rep.lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.cases} cases")
        for w in r.failures:
            rep.lines.append(f"       witness: {w}")
    rep.ok = all(r.passed for r in results)
    rep.data["pass"] = rep.ok
    return rep


COMMANDS = {"decompose": cmd_decompose, "structure": cmd_structure, "census": cmd_census,
            "verify": cmd_verify, "selftest": cmd_selftest}


def run(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    try:
        cfg.validate()
        rep = COMMANDS[cfg.command](cfg)
    except GRWError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    rep.emit(cfg.format, out)
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(RunConfig.from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
