"""Command-line interface: ``cobarlab <command> <input> [--field F] [--maxdeg N] [--format tsv|json] [--seed S]``.

Every command prints deterministic tables keyed by degree (or by check name).
Exit status is 0 when every check of the command passes, 1 when a check fails
and 2 on input errors; input errors also emit a machine-readable record.

``<input>`` is a coalgebra file, the name of a bundled example (``sphere1.coalg``
and friends), or ``random`` for the seeded random coalgebra.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .cobar import CobarError, check_bialgebra, cobar, double_cobar
from .dgc import CoalgebraError, DgCoalgebra, ParseError, random_coalgebra
from .fields import field_from_name
from .free_gerst import FreeModelError, hilbert_series_direct, hilbert_series_pbw, lie_basis, pbw_lie_dimensions
from .graded import format_word
from .hga import HgaError, HgaStructure, check_hga_identities
from .hirsch import FamilyError, check_hirsch, parse_family
from .homology_ring import HomologyRingError, verify_bv, verify_freeness
from .linalg import CompositionNonzeroError
from .transfer import TransferError, transfer_ainfty, verify_formality

COMMANDS = ("validate", "cobar", "double-cobar", "homology", "free-dims", "verify-freeness",
            "verify-bv", "check-identities", "htt", "formality", "hirsch-check")



class UsageError(ValueError):
    """Invalid combination of command and input."""


INPUT_ERRORS = (ParseError, CoalgebraError, FamilyError, CobarError, CompositionNonzeroError,
                TransferError, FreeModelError, HgaError, HomologyRingError, OSError, UsageError)


@dataclass
class Table:
    name: str
    columns: List[str]
    rows: List[List[object]] = dc_field(default_factory=list)


@dataclass
class RunConfig:
    command: str
    input: str
    field: Optional[str]
    max_degree: int
    format: str
    seed: int
    threads: int

    def as_dict(self) -> Dict[str, object]:
        return {"command": self.command, "input": self.input, "field": self.field,
                "maxdeg": self.max_degree, "format": self.format, "seed": self.seed, "threads": self.threads}


# ------------------------------------------------------------------ input

def example_names() -> List[str]:
    return sorted(p.name for p in resources.files("cobarlab.data").iterdir() if p.name.endswith(".coalg"))


def read_input(name: str) -> str:
    path = Path(name)
    if path.exists():
        return path.read_text()
    data = resources.files("cobarlab.data").joinpath(name)
    if data.is_file():
        return data.read_text()
    raise FileNotFoundError(f"no such file or bundled example: {name}")


def _with_field(text: str, field: Optional[str]) -> str:
    # statements are read in order and the last 'field' line wins
    return text if field is None else f"{text}\nfield {field}\n"


def load(cfg: RunConfig):
    """The coalgebra (and the family, possibly empty) named by the configuration."""
    if cfg.input == "random":
        f = field_from_name(cfg.field or "Q")
        c = random_coalgebra(cfg.seed, f, max_degree=cfg.max_degree)
        return c, None
    text = _with_field(read_input(cfg.input), cfg.field)
    c, fam = parse_family(text)
    return c, fam


def suspension_space(c: DgCoalgebra) -> Dict[str, int]:
    """``W`` with ``C = k + s^2 W`` (zero differential, primitive coproduct)."""
    if not c.primitive or any(c.differential(g) for g in c.all_generators()):
        raise UsageError("input must be a double suspension: primitive coproduct and zero differential")
    W = {str(g): c.degree(g) - 2 for g in c.all_generators()}
    bad = [g for g, n in W.items() if n < 1]
    if bad:
        raise UsageError(f"generator {bad[0]!r} has degree < 3, so it is not a double suspension")
    return W


# --------------------------------------------------------------- commands

def _fmt(x) -> object:
    if isinstance(x, bool):
        return "PASS" if x else "FAIL"
    if isinstance(x, Fraction):
        return str(x)
    if x is None:
        return "-"
    if isinstance(x, tuple):
        return format_word(x)
    return x


def cmd_validate(c, fam, cfg):
    t = Table("generators", ["degree", "generators", "differential", "coproduct"])
    for n in sorted({c.degree(g) for g in c.all_generators()}):
        for g in c.generators(n):
            d = " + ".join(f"{v}*{k}" for k, v in sorted(c.differential(g).items(), key=str)) or "0"
            cp = " + ".join(f"{v}*{a}|{b}" for (a, b), v in sorted(c.reduced_coproduct(g).items(), key=str)) or "0"
            t.rows.append([n, g, d, cp])
    checks = Table("checks", ["check", "status"], [["d^2=0, coassociative, compatible", True],
                                                    ["primitive", c.primitive]])
    if fam is not None and not fam.is_reduced:
        checks.rows.append(["family parsed", True])
    return [t, checks], True


def _cobar_table(name, a, N):
    t = Table(name, ["degree", "dim", "H", "d2_zero"])
    for n in range(N + 1):
        square_zero = all(not a.d(a.differential(w)) for w in a.basis(n))
        t.rows.append([n, a.dim(n), a.homology(n).dimension, square_zero])
    return t, all(r[3] for r in t.rows)


def cmd_cobar(c, fam, cfg):
    t, ok = _cobar_table("OmegaC", cobar(c, cfg.max_degree + 1), cfg.max_degree)
    return [t], ok


def cmd_double_cobar(c, fam, cfg):
    a = double_cobar(c, cfg.max_degree + 1)
    t, ok = _cobar_table("Omega2C", a, cfg.max_degree)
    bialg = check_bialgebra(a.coalgebra, max_degree=min(cfg.max_degree, 6))
    checks = Table("OmegaC_bialgebra", ["check", "status", "first_failure"],
                   [[k, ok, w] for k, (ok, w) in bialg.items()])
    return [t, checks], ok and all(good for good, _ in bialg.values())


def cmd_homology(c, fam, cfg):
    N = cfg.max_degree
    cc = c.chain_complex()
    a = cobar(c, N + 1)
    two = None if c.generators(2) else double_cobar(c, N + 1)
    t = Table("homology", ["degree", "H(C)", "H(OmegaC)", "H(Omega2C)"])
    for n in range(N + 1):
        hc = 1 if n == 0 else cc.homology(n).dimension
        t.rows.append([n, hc, a.homology(n).dimension, two.homology(n).dimension if two else None])
    return [t], True


def cmd_free_dims(c, fam, cfg):
    W = suspension_space(c)
    f = c.field
    N = cfg.max_degree
    direct = hilbert_series_direct(lie_basis(W, f, N), f, N)
    pbw = hilbert_series_pbw(W, f, N)
    lie = pbw_lie_dimensions(W, f, N + 1)
    t = Table("free_model", ["degree", "dim_lie", "dim_model", "dim_model_pbw", "equal"])
    for n in range(N + 1):
        t.rows.append([n, lie[n + 1] if n >= 1 else 0, direct[n], pbw[n], direct[n] == pbw[n]])
    return [t], direct == pbw


def cmd_verify_freeness(c, fam, cfg):
    W = suspension_space(c)
    rep = verify_freeness(W, cfg.max_degree, c.field)
    t = Table("freeness", ["degree", "dim_H", "dim_free", "image_rank", "equal"])
    for r in rep.rows:
        t.rows.append([r["degree"], r["dim_H"], r["dim_free"], r["image_rank"],
                       r["dim_H"] == r["dim_free"] == r["image_rank"]])
    checks = Table("checks", ["check", "status"], [["generated", rep.generated], ["morphism", rep.morphism]])
    return [t, checks], rep.ok


def cmd_verify_bv(c, fam, cfg):
    if c.field.characteristic != 0:
        raise UsageError("verify-bv works over Q")
    W = suspension_space(c)
    rep = verify_bv(W, cfg.max_degree)
    t = Table("bv", rep.columns, [[r.get(k) for k in rep.columns] for r in rep.rows])
    checks = Table("checks", ["check", "status"], [[k, v] for k, v in rep.checks.items()])
    return [t, checks], rep.ok


def cmd_check_identities(c, fam, cfg):
    if c.field.characteristic != 2:
        raise UsageError("check-identities works over F2 (use --field F2)")
    hga = HgaStructure(double_cobar(c, cfg.max_degree))
    rep = check_hga_identities(hga, cfg.max_degree)
    t = Table("identities", ["identity", "checked", "status", "counterexample"])
    for r in rep.results:
        ce = None if r.counterexample is None else " ; ".join(format_word(w) for w in r.counterexample)
        t.rows.append([r.name, r.checked, r.ok, ce])
    return [t], rep.ok


def cmd_htt(c, fam, cfg):
    res = transfer_ainfty(c, max_degree=cfg.max_degree, strict=False)
    t = Table("transfer", ["n", "letters", "partial_terms", "tau_terms"])
    for n in sorted(set(res.partials) | set(res.taus)):
        pt = sum(len(v) for v in res.partials.get(n, {}).values())
        tt = sum(len(v) for v in res.taus.get(n, {}).values())
        t.rows.append([n, n + 1, pt, tt])
    terms = Table("partials", ["n", "generator", "image"])
    for n in sorted(res.partials):
        for h in sorted(res.partials[n], key=str):
            img = " + ".join(f"{c}*{'|'.join(map(str, w))}" for w, c in sorted(res.partials[n][h].items(), key=str))
            terms.rows.append([n, h, img])
    checks = Table("checks", ["check", "status", "first_failure"],
                   [["ainfty_relations", res.relations_ok, None], ["twisting_morphism", res.morphism_ok, None]])
    if res.first_failure:
        checks.rows.append(["first_failure", False, f"{res.first_failure[0]}: {format_word(res.first_failure[1])}"])
    return [t, terms, checks], res.ok


def cmd_formality(c, fam, cfg):
    rep = verify_formality(c, cfg.max_degree)
    t = Table("formality", rep.columns, [[r.get(k) for k in rep.columns] for r in rep.rows])
    checks = Table("checks", ["check", "status"], [["algebra_map", rep.algebra_map_ok], ["gamma", rep.gamma_ok]])
    return [t, checks], rep.ok


def cmd_hirsch_check(c, fam, cfg):
    from .hirsch import TwistingFamily

    fam = fam if fam is not None else TwistingFamily(c.field)
    rep = check_hirsch(c, fam, cfg.max_degree)
    t = Table("hirsch", ["check", "status", "detail"])
    for name, chk in rep.checks.items():
        detail = chk.detail or (None if chk.failure is None else str(_fmt(chk.failure)))
        t.rows.append([name, chk.ok, detail])
    t.rows.append(["coassoc_111_signed", rep.coassoc_111["signed"], None])
    t.rows.append(["coassoc_111_unsigned", rep.coassoc_111["unsigned"], "informational"])
    for k, (ok, w) in rep.bialgebra.items():
        t.rows.append([f"bialgebra_{k}", ok, None if w is None else format_word(w)])
    summary = Table("summary", ["property", "value"], [["hirsch", rep.hirsch], ["homotopy_g", rep.homotopy_g]])
    passed = all(rep.checks[k].ok for k in rep.CORE) and rep.checks["nabla1_homotopy"].ok
    passed = passed and all(ok for ok, _ in rep.bialgebra.values())
    return [t, summary], passed


HANDLERS = {
    "validate": cmd_validate, "cobar": cmd_cobar, "double-cobar": cmd_double_cobar,
    "homology": cmd_homology, "free-dims": cmd_free_dims, "verify-freeness": cmd_verify_freeness,
    "verify-bv": cmd_verify_bv, "check-identities": cmd_check_identities, "htt": cmd_htt,
    "formality": cmd_formality, "hirsch-check": cmd_hirsch_check,
}


# ----------------------------------------------------------------- output

def render(cfg: RunConfig, tables: Sequence[Table], passed: bool, error: Optional[Dict] = None) -> str:
    if cfg.format == "json":
        doc = {"command": cfg.command, "config": cfg.as_dict(),
               "tables": [{"name": t.name, "columns": t.columns, "rows": [[_json(x) for x in r] for r in t.rows]}
                          for t in tables],
               "pass": passed}
        if error is not None:
            doc["error"] = error
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    lines = ["# " + "\t".join(f"{k}={v}" for k, v in cfg.as_dict().items())]
    for t in tables:
        lines.append(f"## {t.name}")
        lines.append("\t".join(t.columns))
        for r in t.rows:
            lines.append("\t".join(str(_fmt(x)) for x in r))
    if error is not None:
        lines.append("## error")
        lines.append("\t".join(f"{k}={v}" for k, v in error.items()))
    lines.append(f"# result\t{'PASS' if passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _json(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        return format_word(x)
    return x


def _threads() -> int:
    raw = os.environ.get("COBARLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"COBARLAB_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"COBARLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cobarlab", description="Cobar constructions and their homology operations.")
    p.add_argument("--version", action="version", version=f"cobarlab {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="coalgebra file, bundled example name, or 'random'")
    p.add_argument("--field", choices=["F2", "Q"], default=None, help="override the field of the input")
    p.add_argument("--maxdeg", type=int, default=8, help="degree cutoff N (>= 2)")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized inputs")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.input, args.field, args.maxdeg, args.format, args.seed, 1)
    try:
        cfg.threads = _threads()
        if cfg.max_degree < 2:
            raise UsageError("--maxdeg must be at least 2")
        c, fam = load(cfg)
        cfg.field = c.field.name
        tables, passed = HANDLERS[cfg.command](c, fam, cfg)
    except INPUT_ERRORS as e:
        error = {"type": type(e).__name__, "message": str(e)}
        gen = getattr(e, "generator", None)
        if gen is not None:
            error["generator"] = str(gen)
        line = getattr(e, "line", None)
        if line:
            error["line"] = line
        sys.stdout.write(render(cfg, [], False, error))
        sys.stderr.write(f"cobarlab: {type(e).__name__}: {e}\n")
        return 2
    sys.stdout.write(render(cfg, tables, passed))
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
