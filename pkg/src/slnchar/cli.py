"""Command-line front end.

    slnchar ball --n 3 --radius 4 --out ball.jsonl
    slnchar decompose --n 3 --matrix '{"n": 3, "entries": [...]}'
    slnchar decompose --random 1000 --wordlen 20 --seed 7
    slnchar chartab --n 3 --mod 2
    slnchar lift --n 3 --mod 2 --row 1 --radius 3 --out phi.jsonl
    slnchar tits-check --n 3 --base 2 --mod 8
    slnchar torus-orbits --m 2 --denominator 6
    slnchar fit --samples samples.json --nmax 6
    slnchar classify --candidate phi.jsonl --nmax 6
    slnchar verify --candidate phi.jsonl --check central,psd
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import charcheck, conjdecomp, finquot, subgroups, torus
from .exactmat import DimensionError, IntMatrix, NotUnimodularError, SLMatrix, from_json

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_RESOURCE = 3
EXIT_INPUT = 4


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    ball_cap: int = subgroups.DEFAULT_BALL_CAP
    group_cap: int = finquot.DEFAULT_GROUP_CAP
    threads: int = 1
    tolerances: dict = field(default_factory=lambda: asdict(charcheck.Tolerances()))

    def __post_init__(self):
        if self.ball_cap <= 0 or self.group_cap <= 0 or self.threads <= 0:
            raise ValueError("caps and thread count must be positive")

    def to_json(self) -> dict:
        return asdict(self)


class InputError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_matrix(text: str) -> IntMatrix:
    obj = json.loads(text)
    if isinstance(obj, list):
        return IntMatrix.from_rows(obj)
    return from_json(obj)


def _random_word(n: int, length: int, rng: random.Random) -> SLMatrix:
    gens = [SLMatrix.trusted(n, g) for g in subgroups.generator_keys(n)]
    g = SLMatrix.identity(n)
    for _ in range(length):
        g = g @ rng.choice(gens)
    return g


def _ball_for(cfg: RunConfig, n: int, radius: int) -> subgroups.GroupBall:
    return subgroups.ball_enumerate(n, radius, cap=cfg.ball_cap, central=(n % 2 == 0))


# Subcommands.

def cmd_ball(cfg: RunConfig, a) -> int:
    ball = subgroups.ball_enumerate(a.n, a.radius, cap=cfg.ball_cap, central=a.central)
    header = json.dumps({"config": cfg.to_json(), "count": len(ball)}, sort_keys=True)
    _emit(header + "\n" + subgroups.ball_to_jsonl(ball), a.out)
    return EXIT_OK


def cmd_decompose(cfg: RunConfig, a) -> int:
    fn = conjdecomp.decompose_two_factor if a.two_factor else conjdecomp.decompose
    if a.matrix:
        gamma = _parse_matrix(a.matrix)
        if a.n and gamma.n != a.n:
            raise InputError(f"--n {a.n} disagrees with matrix dimension {gamma.n}")
        w = fn(gamma)
        _emit(dumps({"config": cfg.to_json(), "witness": conjdecomp.witness_to_json(w)}), a.out)
        return EXIT_OK
    if not a.random:
        raise InputError("give --matrix or --random")
    rng = random.Random(cfg.seed)
    n = a.n or 3
    ok, biggest = 0, 0
    for _ in range(a.random):
        gamma = _random_word(n, rng.randint(0, a.wordlen), rng)
        w = fn(gamma)
        ok += w.verify()
        biggest = max(biggest, w.max_entry())
    summary = {"config": cfg.to_json(), "total": a.random, "verified": ok,
               "max_entry": str(biggest)}
    _emit(dumps(summary), a.out)
    return EXIT_OK if ok == a.random else EXIT_VERIFY


def cmd_chartab(cfg: RunConfig, a) -> int:
    g = finquot.enumerate_group(a.n, a.mod, cap=cfg.group_cap)
    t = finquot.character_table(g)
    obj = t.to_json()
    obj["config"] = cfg.to_json()
    _emit(dumps(obj), a.out)
    if a.csv:
        Path(a.csv).write_text(t.to_csv())
    return EXIT_OK


def cmd_lift(cfg: RunConfig, a) -> int:
    g = finquot.enumerate_group(a.n, a.mod, cap=cfg.group_cap)
    t = finquot.character_table(g)
    lifted = finquot.lift_character(t, a.row)
    if a.matrix:
        gamma = _parse_matrix(a.matrix)
        if gamma.n != a.n:
            raise InputError(f"--n {a.n} disagrees with matrix dimension {gamma.n}")
        v = lifted(SLMatrix(gamma.n, gamma.entries))
        _emit(dumps({"config": cfg.to_json(), "value": [v.real, v.imag],
                     "degree": lifted.degree, "level": lifted.level}), a.out)
        return EXIT_OK
    ball = _ball_for(cfg, a.n, a.radius)
    c = charcheck.candidate_from_lift(lifted, ball)
    _emit(charcheck.candidate_to_jsonl(c, {"config": cfg.to_json()}), a.out)
    return EXIT_OK


def cmd_extend(cfg: RunConfig, a) -> int:
    ball = _ball_for(cfg, a.n, a.radius)
    chi = None if a.n % 2 else a.chi
    c = charcheck.trivial_extension(a.n, chi, ball)
    _emit(charcheck.candidate_to_jsonl(c, {"config": cfg.to_json()}), a.out)
    return EXIT_OK


def cmd_tits(cfg: RunConfig, a) -> int:
    rep = finquot.tits_containment_check(a.n, a.base, a.mod, cap=cfg.group_cap)
    obj = rep.to_json()
    obj["config"] = cfg.to_json()
    _emit(dumps(obj), a.out)
    return EXIT_OK if rep.contained or a.n < 3 else EXIT_VERIFY


def cmd_orbits(cfg: RunConfig, a) -> int:
    orbits = torus.finite_orbits(a.m, a.denominator)
    obj = torus.orbits_to_json(a.m, a.denominator, orbits)
    obj["config"] = cfg.to_json()
    _emit(dumps(obj), a.out)
    return EXIT_OK


def cmd_fit(cfg: RunConfig, a) -> int:
    try:
        m, samples = torus.samples_from_json(json.loads(Path(a.samples).read_text()))
    except (OSError, KeyError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read samples: {e}") from e
    fit = torus.fit_restriction(samples, m, a.nmax)
    obj = fit.to_json()
    obj["config"] = cfg.to_json()
    _emit(dumps(obj), a.out)
    return EXIT_OK


def _load_candidate(path: str) -> charcheck.CandidateCharacter:
    try:
        return charcheck.candidate_from_jsonl(Path(path).read_text())
    except (OSError, KeyError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read candidate: {e}") from e


def _tolerances(cfg: RunConfig) -> charcheck.Tolerances:
    return charcheck.Tolerances(**cfg.tolerances)


def cmd_classify(cfg: RunConfig, a) -> int:
    c = _load_candidate(a.candidate)
    rep = charcheck.classify(c, n_max=a.nmax, tol=_tolerances(cfg), level_cap=a.level_cap)
    obj = rep.to_json()
    obj["config"] = cfg.to_json()
    _emit(dumps(obj), a.out)
    return EXIT_VERIFY if a.strict and rep.verdict == "undecided" else EXIT_OK


def cmd_verify(cfg: RunConfig, a) -> int:
    c = _load_candidate(a.candidate)
    tol = _tolerances(cfg)
    checks = [s.strip() for s in a.check.split(",") if s.strip()]
    out = {"config": cfg.to_json()}
    ok = True
    for name in checks:
        if name == "central":
            rep = charcheck.check_central(c, tol.central)
        elif name == "psd":
            rep = charcheck.check_positive_definite(c, tol=tol.psd)
        else:
            raise InputError(f"unknown check {name!r}")
        out[name] = rep.to_json()
        ok &= rep.passed
    out["passed"] = ok
    _emit(dumps(out), a.out)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--ball-cap", type=int, default=None)
    common.add_argument("--group-cap", type=int, default=None)
    p = argparse.ArgumentParser(prog="slnchar", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", default=None)
        return sp

    sp = add("ball", cmd_ball, help="enumerate a word ball")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--central", action="store_true", help="saturate by the centre {±I}")

    sp = add("decompose", cmd_decompose, help="conjugate γ into G_1^t G_n V_1")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--matrix", default=None)
    sp.add_argument("--random", type=int, default=0)
    sp.add_argument("--wordlen", type=int, default=20)
    sp.add_argument("--two-factor", action="store_true")

    sp = add("chartab", cmd_chartab, help="character table of SL_n(Z/N)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mod", type=int, required=True)
    sp.add_argument("--csv", default=None)

    sp = add("lift", cmd_lift, help="lift an irreducible of SL_n(Z/N) to SL_n(Z)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mod", type=int, required=True)
    sp.add_argument("--row", type=int, required=True)
    sp.add_argument("--matrix", default=None)
    sp.add_argument("--radius", type=int, default=3)

    sp = add("extend", cmd_extend, help="trivial extension of a central character")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--chi", type=int, default=1, choices=(1, -1))
    sp.add_argument("--radius", type=int, default=3)

    sp = add("tits-check", cmd_tits, help="<e_ij^N> contains the level-N^2 kernel mod M?")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--base", type=int, required=True)
    sp.add_argument("--mod", type=int, required=True)

    sp = add("torus-orbits", cmd_orbits, help="finite SL_m(Z)-orbits on (Q/Z)^m")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--denominator", type=int, required=True)

    sp = add("fit", cmd_fit, help="convex fit of sampled φ|_V")
    sp.add_argument("--samples", required=True)
    sp.add_argument("--nmax", type=int, default=6)

    sp = add("classify", cmd_classify, help="congruence / centre / undecided")
    sp.add_argument("--candidate", required=True)
    sp.add_argument("--nmax", type=int, default=6)
    sp.add_argument("--level-cap", type=int, default=64)
    sp.add_argument("--strict", action="store_true")

    sp = add("verify", cmd_verify, help="centrality and positive-definiteness checks")
    sp.add_argument("--candidate", required=True)
    sp.add_argument("--check", default="central,psd")
    return p


def _config_from_args(a) -> RunConfig:
    env = os.environ
    params = {k: v for k, v in vars(a).items()
              if k not in ("func", "seed", "threads", "ball_cap", "group_cap", "out")}
    return RunConfig(
        subcommand=a.cmd,
        params=params,
        seed=a.seed,
        ball_cap=a.ball_cap or int(env.get("SLNCHAR_BALL_CAP", subgroups.DEFAULT_BALL_CAP)),
        group_cap=a.group_cap or int(env.get("SLNCHAR_GROUP_CAP", finquot.DEFAULT_GROUP_CAP)),
        threads=a.threads or int(env.get("SLNCHAR_THREADS", os.cpu_count() or 1)),
    )


def _error(kind: str, msg: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": {"type": kind, "message": msg, "exit_code": code}},
                                sort_keys=True) + "\n")
    return code


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        cfg = _config_from_args(a)
        return a.func(cfg, a)
    except (subgroups.ResourceLimitError, torus.ResourceLimitError) as e:
        return _error("resource_cap", str(e), EXIT_RESOURCE)
    except conjdecomp.WitnessError as e:
        return _error("verification", str(e), EXIT_VERIFY)
    except (InputError, DimensionError, NotUnimodularError, ValueError, IndexError,
            charcheck.DomainError, ArithmeticError) as e:
        return _error(type(e).__name__, str(e), EXIT_INPUT)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
