"""Batch front end: problem ingestion, pipeline orchestration, artifact
persistence.

Subcommands: degrees, dyndeg, classify, fourier, radial, bdj, modp,
semiconj, zeta.  Each run resolves a problem (inline flags merged over an
optional JSON/TOML problem file), executes the pipeline, and writes
artifacts into --output:

  results.json   deterministic payload; byte-identical across reruns
  meta.json      timestamp, argv, version (everything non-deterministic)
  degrees.csv / fourier.csv / radial.csv   tabular views where they apply

Exact rationals are serialized as "p/q" strings (integers as plain decimal
strings), never as floats.  Exit codes: 0 success, 2 malformed input
(SchemaError), 3 violated mathematical precondition (PreconditionError);
both emit a one-line JSON diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import re
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .classify import classify_general
from .degrees import (DegreeSequence, MonomialMap, degree_sequence,
                      dynamical_degrees, monomial_map, series_truncation,
                      zeta_truncation)
from .errors import PreconditionError, SchemaError
from .exact_linalg import IntegerMatrix
from .fourier import (bdj_transform, build_surface_plf, fourier_closed_form,
                      radial_limit_probe, reconstruct_degrees)
from .modp import (degree_sequence_mod_p, p_kernel_probe, reduce_mod_p,
                   weak_periodicity_report)
from .polytope import (Fan, ToricDivisor, product_p1_fan,
                       projective_space_fan)
from .semiconj import (degree_sequences_equal, find_semiconjugacy,
                       intertwiner_space)

PROBLEM_KEYS = ("matrix", "variety", "divisor", "k", "N",
                "precision_bits", "primes")

_PD_RE = re.compile(r"^P(\d+)$")


# ---------------------------------------------------------------------------
# input parsing


def _parse_fraction(tok) -> Fraction:
    if isinstance(tok, float):
        raise SchemaError(f'rationals must be exact ("p/q" or "0.5" as a '
                          f"string), got float {tok!r}")
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(f"not a rational number: {tok!r}") from exc


def _parse_matrix(text) -> list[list[int]]:
    """Integer matrix from JSON ("[[2,-1],[1,2]]"), semicolon rows
    ("2,-1;1,2"), or an already-decoded list of lists."""
    rows = text
    if isinstance(text, str):
        stripped = text.strip()
        if stripped.startswith("["):
            try:
                rows = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"bad matrix literal: {exc}") from exc
        else:
            try:
                rows = [[int(e) for e in row.split(",")]
                        for row in stripped.split(";")]
            except ValueError as exc:
                raise SchemaError(f"bad matrix literal: {text!r}") from exc
    if (not isinstance(rows, list) or not rows
            or not all(isinstance(r, list) for r in rows)):
        raise SchemaError("matrix must be a list of rows")
    out = []
    for row in rows:
        if len(row) != len(rows):
            raise SchemaError("matrix must be square")
        cleaned = []
        for e in row:
            if isinstance(e, bool) or not isinstance(e, int):
                raise SchemaError(f"matrix entries must be integers: {e!r}")
            cleaned.append(e)
        out.append(cleaned)
    return out


def _parse_int_list(text) -> list[int]:
    if isinstance(text, str):
        items = [t for t in text.replace(";", ",").split(",") if t.strip()]
    elif isinstance(text, (list, tuple)):
        items = list(text)
    else:
        raise SchemaError(f"expected an integer list, got {text!r}")
    try:
        return [int(t) for t in items]
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad integer list: {text!r}") from exc


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    """Progression pairs "a,b;a,b" for the weak-periodicity probe."""
    pairs = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise SchemaError(f"bad progression pair: {chunk!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise SchemaError(f"bad progression pair: {chunk!r}") from exc
    if not pairs:
        raise SchemaError("at least one progression pair is required")
    return pairs


def _parse_float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(t) for t in text]
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise SchemaError(f"bad float list: {text!r}") from exc


def _load_problem_file(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise SchemaError(f"problem file not found: {path}")
    raw = p.read_bytes()
    if p.suffix.lower() == ".toml":
        try:
            data = tomllib.loads(raw.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise SchemaError(f"bad TOML problem file: {exc}") from exc
    else:
        try:
            data = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise SchemaError(f"bad JSON problem file: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("problem file must hold a single object")
    unknown = sorted(set(data) - set(PROBLEM_KEYS))
    if unknown:
        raise SchemaError(f"unknown problem keys: {', '.join(unknown)}")
    return data


def _fan_from_spec(spec) -> tuple[Fan, object]:
    """Fan plus its canonical echo ("P2", "P1xP1", or {"fan": {...}})."""
    if isinstance(spec, Fan):
        return spec, {"fan": spec.to_dict()}
    if isinstance(spec, dict):
        if set(spec) != {"fan"}:
            raise SchemaError('variety object must be {"fan": {...}}')
        return Fan.from_dict(spec["fan"]), {"fan": dict(spec["fan"])}
    if not isinstance(spec, str):
        raise SchemaError(f"bad variety spec: {spec!r}")
    m = _PD_RE.match(spec)
    if m:
        d = int(m.group(1))
        if d < 1:
            raise SchemaError("projective space needs dimension >= 1")
        return projective_space_fan(d), spec
    if spec == "P1xP1":
        return product_p1_fan(), spec
    path = Path(spec)
    if path.is_file():
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"bad fan file {spec}: {exc}") from exc
        if isinstance(data, dict) and set(data) == {"fan"}:
            data = data["fan"]
        fan = Fan.from_dict(data)
        return fan, {"fan": fan.to_dict()}
    raise SchemaError(f"unknown variety {spec!r} (use Pd, P1xP1, or a "
                      "fan JSON file)")


def _is_basis_ray(ray: tuple[int, ...]) -> bool:
    return sum(ray) == 1 and all(c in (0, 1) for c in ray)


def _divisor_from_spec(spec, fan: Fan, variety_echo) -> ToricDivisor:
    """Explicit coefficients, or "O(1)" on the built-in varieties (the
    standard simplex on Pd, the unit square on P1xP1)."""
    if spec is None or spec == "O(1)":
        if not isinstance(variety_echo, str):
            raise SchemaError('"O(1)" is only defined for the built-in '
                              "varieties; give divisor coefficients")
        coeffs = tuple(Fraction(0) if _is_basis_ray(r) else Fraction(1)
                       for r in fan.rays)
        return ToricDivisor(fan, coeffs)
    if isinstance(spec, dict):
        if set(spec) != {"coeffs"}:
            raise SchemaError('divisor object must be {"coeffs": [...]}')
        spec = spec["coeffs"]
    if isinstance(spec, str):
        stripped = spec.strip()
        if stripped.startswith("["):
            try:
                spec = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"bad divisor literal: {exc}") from exc
        else:
            spec = [t for t in stripped.split(",") if t.strip()]
    if not isinstance(spec, (list, tuple)):
        raise SchemaError(f"bad divisor spec: {spec!r}")
    return ToricDivisor(fan, tuple(_parse_fraction(c) for c in spec))


class Problem:
    """Resolved inputs shared by every subcommand."""

    def __init__(self, rows, fan, variety_echo, divisor, k, N, precision,
                 primes):
        self.rows = rows
        self.fan = fan
        self.variety_echo = variety_echo
        self.divisor = divisor
        self.k = k
        self.N = N
        self.precision = precision
        self.primes = primes
        self.map: MonomialMap = monomial_map(rows, fan)

    def echo(self) -> dict:
        """Problem restated in the input schema, so results.json carries a
        rerunnable problem file."""
        return {"matrix": [list(r) for r in self.rows],
                "variety": self.variety_echo,
                "divisor": {"coeffs": [str(c) for c in self.divisor.coeffs]},
                "k": self.k,
                "N": self.N,
                "precision_bits": self.precision,
                "primes": list(self.primes)}


def _resolve_problem(args, default_n: int = 20) -> Problem:
    file_data = _load_problem_file(args.problem) if args.problem else {}

    def pick(flag, key, fallback=None):
        if flag is not None:
            return flag
        return file_data.get(key, fallback)

    raw_matrix = pick(args.matrix, "matrix")
    if raw_matrix is None:
        raise SchemaError("a matrix is required (--matrix or problem file)")
    rows = _parse_matrix(raw_matrix)
    dim = len(rows)

    variety_spec = pick(args.variety, "variety", f"P{dim}")
    fan, echo = _fan_from_spec(variety_spec)
    if fan.dim != dim:
        raise SchemaError(f"matrix is {dim}x{dim} but the fan has "
                          f"dimension {fan.dim}")
    divisor = _divisor_from_spec(pick(args.divisor, "divisor"), fan, echo)

    k = pick(args.k, "k", 1)
    n = pick(args.N, "N", default_n)
    precision = pick(args.precision_bits, "precision_bits", 64)
    for name, val in (("k", k), ("N", n), ("precision_bits", precision)):
        if isinstance(val, bool) or not isinstance(val, int):
            raise SchemaError(f"{name} must be an integer, got {val!r}")

    primes = pick(getattr(args, "primes", None), "primes", [])
    primes = _parse_int_list(primes) if primes else []

    return Problem(rows, fan, echo, divisor, k, n, precision, primes)


# ---------------------------------------------------------------------------
# serialization and artifacts


def _frac(x: Fraction) -> str:
    return str(x)


def _csv_table(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write_artifacts(outdir: str, results: dict, tables: dict[str, str],
                     argv: Sequence[str]) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(results, sort_keys=True, indent=2,
                         allow_nan=False) + "\n"
    (out / "results.json").write_text(payload)
    meta = {"argv": list(argv),
            "created_unix": time.time(),
            "tool": "toric-degrees 0.1.0"}
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    for name, text in tables.items():
        (out / name).write_text(text)


# ---------------------------------------------------------------------------
# degree-sequence cache


def _sequence_cache_key(problem: Problem) -> str:
    blob = json.dumps({"matrix": [list(r) for r in problem.rows],
                       "fan": problem.fan.to_dict(),
                       "coeffs": [str(c) for c in problem.divisor.coeffs],
                       "k": problem.k},
                      sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _sequence(problem: Problem, cache_dir: Optional[str],
              threads: Optional[int]) -> DegreeSequence:
    """degree_sequence with an optional on-disk memo keyed by content hash
    of (matrix, divisor, k); a longer cached run serves shorter requests."""
    if cache_dir is None:
        return degree_sequence(problem.map, problem.divisor, problem.k,
                               problem.N, threads=threads)
    path = Path(cache_dir) / f"{_sequence_cache_key(problem)}.json"
    if path.is_file():
        try:
            stored = json.loads(path.read_text())
            terms = [Fraction(t) for t in stored["terms"]]
        except (json.JSONDecodeError, KeyError, ValueError, TypeError):
            terms = []
        if len(terms) >= problem.N + 1:
            return DegreeSequence(problem.map, problem.divisor, problem.k,
                                  tuple(terms[:problem.N + 1]))
    seq = degree_sequence(problem.map, problem.divisor, problem.k, problem.N,
                          threads=threads)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"terms": [str(t) for t in seq.terms]}) + "\n")
    return seq


# ---------------------------------------------------------------------------
# subcommand pipelines: each returns (results dict, named CSV tables)


def cmd_degrees(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args)
    seq = _sequence(problem, args.cache, args.threads)
    results = {"subcommand": "degrees",
               "problem": problem.echo(),
               "terms": [_frac(t) for t in seq.terms]}
    table = _csv_table(("n", "degree"),
                       ((n, _frac(t)) for n, t in enumerate(seq.terms)))
    return results, {"degrees.csv": table}


def cmd_dyndeg(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args)
    dd = dynamical_degrees(problem.map, precision=problem.precision)
    ks = range(dd.dim + 1)
    results = {"subcommand": "dyndeg",
               "problem": problem.echo(),
               "lower": [_frac(dd.lower[k]) for k in ks],
               "upper": [_frac(dd.upper[k]) for k in ks],
               "exact": [None if dd.exact[k] is None else _frac(dd.exact[k])
                         for k in ks],
               "midpoint": [dd.midpoint(k) for k in ks]}
    table = _csv_table(
        ("k", "lower", "upper", "exact"),
        ((k, _frac(dd.lower[k]), _frac(dd.upper[k]),
          "" if dd.exact[k] is None else _frac(dd.exact[k])) for k in ks))
    return results, {"degrees.csv": table}


def cmd_classify(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args, default_n=40)
    res = classify_general(problem.map, problem.divisor, k=problem.k,
                           N=problem.N, precision=problem.precision)
    results = {"subcommand": "classify", "problem": problem.echo()}
    results.update(res.to_dict())
    tables: dict[str, str] = {}
    if args.with_fourier:
        # evidence is attached opportunistically: a real spectrum or a
        # non-surface input has no circle function, and that is itself a
        # reportable answer rather than a failure of the classify run
        try:
            _, plf = build_surface_plf(problem.map, problem.divisor)
            ev = fourier_closed_form(plf, M=args.M)
            rec = reconstruct_degrees(ev, problem.N)
            results["fourier"] = ev.to_dict()
            results["fourier"]["reconstruction"] = rec.to_dict()
            tables["fourier.csv"] = ev.a_table_csv()
        except PreconditionError as exc:
            results["fourier"] = None
            results["fourier_unavailable"] = str(exc)
    return results, tables


def cmd_fourier(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args)
    plane, plf = build_surface_plf(problem.map, problem.divisor)
    ev = fourier_closed_form(plf, M=args.M)
    rec = reconstruct_degrees(ev, problem.N)
    results = {"subcommand": "fourier",
               "problem": problem.echo(),
               "plane": plane.to_dict(),
               "evidence": ev.to_dict(),
               "reconstruction": rec.to_dict()}
    return results, {"fourier.csv": ev.a_table_csv()}


def cmd_radial(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args)
    rho_list = _parse_float_list(args.rho)
    _, plf = build_surface_plf(problem.map, problem.divisor)
    ev = fourier_closed_form(plf, M=max(1, abs(args.m)))
    probe = radial_limit_probe(ev, args.m, rho_list, args.terms)
    errors = [abs(e - probe.reference) for _, e in probe.estimates]
    results = {"subcommand": "radial",
               "problem": problem.echo(),
               "probe": probe.to_dict(),
               "abs_errors": errors,
               "terms": args.terms}
    return results, {"radial.csv": probe.csv()}


def cmd_bdj(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args)
    seq = _sequence(problem, args.cache, args.threads)
    delta_phi = series_truncation(seq)
    res = bdj_transform(delta_phi)
    results = {"subcommand": "bdj",
               "problem": problem.echo(),
               "delta_phi": [_frac(c) for c in delta_phi],
               "transform": res.to_dict()}
    table = _csv_table(("n", "delta_phi", "delta_f"),
                       ((n, _frac(a), _frac(b))
                        for n, (a, b) in enumerate(zip(delta_phi,
                                                       res.coeffs))))
    return results, {"degrees.csv": table}


def cmd_zeta(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args)
    seq = _sequence(problem, args.cache, args.threads)
    zeta = zeta_truncation(seq)
    results = {"subcommand": "zeta",
               "problem": problem.echo(),
               "degrees": [_frac(t) for t in seq.terms],
               "zeta": [_frac(z) for z in zeta]}
    table = _csv_table(("n", "degree", "zeta"),
                       ((n, _frac(t), _frac(z))
                        for n, (t, z) in enumerate(zip(seq.terms, zeta))))
    return results, {"degrees.csv": table}


def _mod_p_terms(problem: Problem, p: int, args):
    """Closed-form reduction when the surface fast path applies, exact
    computation reduced termwise otherwise."""
    if problem.map.dim == 2:
        try:
            s = degree_sequence_mod_p(problem.map, problem.divisor, p,
                                      problem.N)
            return s, "closed-form"
        except PreconditionError:
            pass
    seq = _sequence(problem, args.cache, args.threads)
    return reduce_mod_p(seq, p), "exact-reduction"


def cmd_modp(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args, default_n=200)
    if not problem.primes:
        raise SchemaError("modp requires --primes (or a primes list in "
                          "the problem file)")
    pairs = _parse_pairs(args.pairs)
    per_prime = {}
    columns = {}
    for p in problem.primes:
        s, source = _mod_p_terms(problem, p, args)
        report = weak_periodicity_report(s, pairs, args.K_max)
        entry = {"source": source,
                 "terms": list(s.terms),
                 "weak_periodicity": report.to_dict()}
        if problem.N >= p ** args.depth * args.window:
            entry["p_kernel"] = p_kernel_probe(s, args.depth,
                                               args.window).to_dict()
        else:
            entry["p_kernel"] = None
            entry["p_kernel_skipped"] = (
                f"needs N >= p^depth*window = {p ** args.depth * args.window}")
        per_prime[str(p)] = entry
        columns[p] = s.terms
    results = {"subcommand": "modp",
               "problem": problem.echo(),
               "pairs": [list(ab) for ab in pairs],
               "K_max": args.K_max,
               "depth": args.depth,
               "window": args.window,
               "per_prime": per_prime}
    header = ["n"] + [f"mod_{p}" for p in problem.primes]
    rows = ((n, *(columns[p][n] for p in problem.primes))
            for n in range(problem.N + 1))
    return results, {"degrees.csv": _csv_table(header, rows)}


def cmd_semiconj(args) -> tuple[dict, dict]:
    problem = _resolve_problem(args)
    if args.matrix2 is None:
        raise SchemaError("semiconj requires --matrix2")
    rows2 = _parse_matrix(args.matrix2)
    if len(rows2) != len(problem.rows):
        raise SchemaError("the two matrices must have the same size")
    a = problem.map.matrix
    b = IntegerMatrix(tuple(tuple(r) for r in rows2))
    found = find_semiconjugacy(a, b, box_bound=args.box_bound)
    results = {"subcommand": "semiconj",
               "problem": problem.echo(),
               "matrix2": [list(r) for r in rows2],
               "found": found is not None,
               "semiconjugacy": None if found is None else found.to_dict()}
    if found is None:
        # the searched spaces themselves are the informative failure output
        results["intertwiner_spaces"] = {
            str(u): [[list(r) for r in x.rows]
                     for x in intertwiner_space(a, b, u)]
            for u in (1, 2, 3, 4, 6)}
    tables: dict[str, str] = {}
    try:
        seq_a = _sequence(problem, args.cache, args.threads)
        problem2 = Problem(rows2, problem.fan, problem.variety_echo,
                           problem.divisor, problem.k, problem.N,
                           problem.precision, problem.primes)
        seq_b = _sequence(problem2, args.cache, args.threads)
        results["degree_sequences_agree"] = degree_sequences_equal(seq_a,
                                                                   seq_b)
        tables["degrees.csv"] = _csv_table(
            ("n", "degree_lhs", "degree_rhs"),
            ((n, _frac(x), _frac(y))
             for n, (x, y) in enumerate(zip(seq_a.terms, seq_b.terms))))
    except PreconditionError as exc:
        results["degree_sequences_agree"] = None
        results["degree_comparison_unavailable"] = str(exc)
    return results, tables


HANDLERS = {"degrees": cmd_degrees, "dyndeg": cmd_dyndeg,
            "classify": cmd_classify, "fourier": cmd_fourier,
            "radial": cmd_radial, "bdj": cmd_bdj, "modp": cmd_modp,
            "semiconj": cmd_semiconj, "zeta": cmd_zeta}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    """Routes argparse's own failures through the schema exit path."""

    def error(self, message):
        raise SchemaError(message)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--problem", metavar="FILE",
                    help="JSON or TOML problem file; inline flags override")
    sp.add_argument("--matrix", help='"[[2,-1],[1,2]]" or "2,-1;1,2"')
    sp.add_argument("--variety",
                    help="Pd | P1xP1 | fan JSON file (default: P<dim>)")
    sp.add_argument("--divisor",
                    help='"O(1)" (default) or coefficients "0,0,1"')
    sp.add_argument("--k", type=int, default=None,
                    help="intersection codegree (default 1)")
    sp.add_argument("--N", type=int, default=None,
                    help="truncation order")
    sp.add_argument("--precision-bits", type=int, default=None,
                    dest="precision_bits")
    sp.add_argument("--output", default=".", metavar="DIR",
                    help="artifact directory (default: current directory)")
    sp.add_argument("--cache", default=None, metavar="DIR",
                    help="memoize degree sequences here")
    sp.add_argument("--threads", type=int, default=None,
                    help="cap worker threads (or set TORIC_DEGREES_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toric-degrees",
                     description="Exact degree sequences, dynamical degrees, "
                                 "and generating-series classification for "
                                 "monomial self-maps of toric varieties.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    descriptions = {
        "degrees": "exact degree sequence deg(f^n) for n = 0..N",
        "dyndeg": "certified enclosures of all dynamical degrees",
        "classify": "Rational / NaturalBoundary verdict with certificate",
        "fourier": "closed-form Fourier table of the degree-growth "
                    "circle function",
        "radial": "Abel radial-limit estimates of a Fourier coefficient",
        "bdj": "functional-equation transform of the degree series",
        "modp": "mod-p reductions with periodicity and p-kernel probes",
        "semiconj": "search for an integral semiconjugacy X A^u = B^u X",
        "zeta": "truncated dynamical zeta function of the degree sequence",
    }
    sps = {}
    for name, desc in descriptions.items():
        sp = sub.add_parser(name, help=desc, description=desc)
        _add_common(sp)
        sps[name] = sp

    sps["classify"].add_argument("--with-fourier", action="store_true",
                                 help="attach Fourier evidence when the "
                                      "surface circle function exists")
    sps["classify"].add_argument("--M", type=int, default=10,
                                 help="Fourier table size for --with-fourier")
    sps["fourier"].add_argument("--M", type=int, default=50,
                                help="compute a_m for |m| <= M")
    sps["radial"].add_argument("--m", type=int, default=0,
                               help="Fourier mode to probe")
    sps["radial"].add_argument("--rho", default="0.99,0.997,0.999",
                               help="radii, comma separated")
    sps["radial"].add_argument("--terms", type=int, default=100_000,
                               help="series terms per radius")
    sps["modp"].add_argument("--primes",
                             help='primes, comma separated ("7,101")')
    sps["modp"].add_argument("--pairs", default="1,0;2,1",
                             help='progressions "a,b;a,b" to probe')
    sps["modp"].add_argument("--K-max", type=int, default=10, dest="K_max",
                             help="largest modulus k in the witness search")
    sps["modp"].add_argument("--depth", type=int, default=2,
                             help="p-kernel depth e")
    sps["modp"].add_argument("--window", type=int, default=50,
                             help="p-kernel window length")
    sps["semiconj"].add_argument("--matrix2", help="right-hand matrix")
    sps["semiconj"].add_argument("--box-bound", type=int, default=10,
                                 dest="box_bound")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads is not None and args.threads < 1:
            raise SchemaError("--threads must be positive")
        results, tables = HANDLERS[args.subcommand](args)
        _write_artifacts(args.output, results, tables, argv)
    except SchemaError as exc:
        print(json.dumps({"error": "SchemaError", "message": str(exc)}),
              file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 3
    print(f"wrote {Path(args.output) / 'results.json'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
