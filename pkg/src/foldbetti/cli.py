"""Command-line front end: parse instances, compute, cross-verify, report.

Instances are JSON files ({"field": "rational", "k": 3, "forms": [{"coeffs":
["1","0","-1/2"], "mult": 2}, ...]}); rationals travel as strings so no
float ever touches a coefficient.  Reports come out as aligned text or as
key-sorted JSON that is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .betti import (
    METHODS,
    compute_betti,
    herzog_kuhl_residuals,
)
from .exactlin import Fp
from .forms import essentialize, normalize
from .matroid import (
    hamming_weights,
    height_of_fold_ideal,
    tutte_polynomial,
    tutte_shifted_coeffs,
)
from .oracle import OracleLimitError, b1_via_circuits, betti_from_hilbert, hf_report


class InstanceError(Exception):
    """The instance file is malformed; the message names the bad field."""


class CommandError(Exception):
    """The requested computation cannot run with the given options."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass
class InstanceFile:
    """Validated instance: scalar field, ambient count, forms with multiplicity."""

    field: str
    p: int | None
    k: int
    forms: list

    @property
    def n(self) -> int:
        return sum(m for _, m in self.forms)

    def to_json_dict(self):
        return {
            "field": self.field,
            "k": self.k,
            "forms": [
                {"coeffs": [str(c) for c in coeffs], "mult": m}
                for coeffs, m in self.forms
            ],
        }


def parse_instance(text) -> InstanceFile:
    """Parse and validate instance JSON; errors carry the offending path."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("malformed JSON: %s" % exc) from exc
    if not isinstance(data, dict):
        raise InstanceError("instance: expected a JSON object")
    field = data.get("field", "rational")
    p = None
    if field != "rational":
        if not (isinstance(field, str) and field.startswith("gf(") and field.endswith(")")):
            raise InstanceError('field: expected "rational" or "gf(p)", got %r' % (field,))
        try:
            p = int(field[3:-1])
        except ValueError:
            raise InstanceError("field: cannot read a prime out of %r" % (field,)) from None
        if not _is_prime(p):
            raise InstanceError("field: %d is not prime" % p)
    k = data.get("k")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InstanceError("k: expected a positive integer, got %r" % (k,))
    raw_forms = data.get("forms")
    if not isinstance(raw_forms, list) or not raw_forms:
        raise InstanceError("forms: expected a nonempty list")
    parsed = []
    any_nonzero = False
    for i, item in enumerate(raw_forms):
        path = "forms[%d]" % i
        if not isinstance(item, dict):
            raise InstanceError("%s: expected an object" % path)
        coeffs = item.get("coeffs")
        if not isinstance(coeffs, list) or len(coeffs) != k:
            got = len(coeffs) if isinstance(coeffs, list) else type(coeffs).__name__
            raise InstanceError("%s.coeffs: expected %d entries, got %s" % (path, k, got))
        mult = item.get("mult", 1)
        if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
            raise InstanceError("%s.mult: expected a positive integer, got %r" % (path, mult))
        vals = []
        for j, c in enumerate(coeffs):
            if isinstance(c, bool) or not isinstance(c, (str, int)):
                raise InstanceError("%s.coeffs[%d]: expected a rational string, got %r" % (path, j, c))
            try:
                q = Fraction(c)
            except (ValueError, ZeroDivisionError) as exc:
                raise InstanceError("%s.coeffs[%d]: cannot parse %r as a rational: %s" % (path, j, c, exc)) from None
            if p is not None:
                if q.denominator % p == 0:
                    raise InstanceError("%s.coeffs[%d]: denominator of %s vanishes in GF(%d)" % (path, j, q, p))
                vals.append(Fp(q.numerator * pow(q.denominator, -1, p), p))
            else:
                vals.append(q)
        if any(v != 0 for v in vals):
            any_nonzero = True
        parsed.append((tuple(vals), mult))
    if not any_nonzero:
        raise InstanceError("forms: every form is zero")
    return InstanceFile(field if p is None else "gf(%d)" % p, p, k, parsed)


def to_collection(instance: InstanceFile):
    return normalize(instance.forms, instance.k)


@dataclass
class RunReport:
    """Per-run results plus an overall success flag (drives the exit code)."""

    data: dict
    ok: bool

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        return render_text(self.data)


def _resolve_folds(folds, n, allow_trivial):
    if folds is None:
        return list(range(1, n + 1))
    for a in folds:
        if a < 1:
            raise CommandError("fold %d must be at least 1" % a)
        if a > n and not allow_trivial:
            raise CommandError(
                "fold %d exceeds n = %d; pass --allow-trivial for the zero ideal" % (a, n)
            )
    return list(folds)


def run(
    command: str,
    instance: InstanceFile,
    folds=None,
    method: str = "auto",
    degrees=None,
    tutte_threshold: int = 16,
    allow_trivial: bool = False,
) -> RunReport:
    """Execute one CLI command against a parsed instance."""
    sigma = to_collection(instance)
    ess = essentialize(sigma)
    n = sigma.n
    data = {
        "command": command,
        "instance": instance.to_json_dict(),
        "n": n,
        "k_original": instance.k,
        "k_effective": ess.k,
    }
    if instance.p is not None:
        data["warnings"] = [
            "prime-field run: the closed forms are only verified over the rationals"
        ]
    ok = True

    if command == "betti":
        folds = _resolve_folds(folds, n, allow_trivial)
        results = []
        for a in folds:
            use = "auto" if a > n else method
            table = compute_betti(sigma, a, use, tutte_threshold)
            results.append({"a": a, "methods": {method: table.to_json_dict()}})
        data["results"] = results
    elif command == "tutte":
        poly = tutte_polynomial(ess)
        data["tutte"] = poly.to_json_dict()
        data["tutte_shifted"] = {
            "terms": [
                {"x": i, "y": j, "c": str(c)}
                for (i, j), c in sorted(tutte_shifted_coeffs(poly).items())
            ]
        }
    elif command == "hamming":
        data["hamming"] = list(hamming_weights(ess).d)
    elif command == "height":
        folds = _resolve_folds(folds, n, False)
        data["heights"] = {str(a): height_of_fold_ideal(sigma, a) for a in folds}
    elif command == "hilbert":
        if not folds or len(folds) != 1:
            raise CommandError("hilbert needs exactly one fold (--fold A)")
        a = _resolve_folds(folds, n, False)[0]
        if degrees is None:
            degrees = range(a, a + sigma.k)
        bad = [d for d in degrees if d < a]
        if bad:
            raise CommandError("degree %d is below the fold %d" % (bad[0], a))
        data["hilbert"] = hf_report(sigma, a, degrees).to_json_dict()
    elif command == "verify":
        folds = _resolve_folds(folds, n, allow_trivial)
        data["hamming"] = list(hamming_weights(ess).d)
        results = []
        for a in folds:
            entry, agree = _verify_fold(sigma, ess, a, n, tutte_threshold)
            results.append(entry)
            ok = ok and agree
        data["results"] = results
    else:
        raise CommandError("unknown command %r" % (command,))
    return RunReport(data, ok)


def _verify_fold(sigma, ess, a, n, tutte_threshold):
    methods = {}
    if a > n:
        table = compute_betti(sigma, a, "auto", tutte_threshold)
        methods["recursion"] = table.to_json_dict()
        entry = {"a": a, "methods": methods, "verdict": "agree"}
        return entry, True
    reference = compute_betti(sigma, a, "recursion", tutte_threshold)
    methods["recursion"] = reference.to_json_dict()
    disagreements = []
    try:
        t = compute_betti(sigma, a, "tutte_hk", tutte_threshold)
        methods["tutte_hk"] = t.to_json_dict()
        if t != reference:
            disagreements.append("tutte_hk")
    except ValueError as exc:
        if "height window" not in str(exc):
            raise
        methods["tutte_hk"] = {"skipped": str(exc)}
    try:
        o = betti_from_hilbert(sigma, a)
        methods["oracle"] = o.to_json_dict()
        if o != reference:
            disagreements.append("oracle")
    except OracleLimitError as exc:
        methods["oracle"] = {"skipped": str(exc)}
    if a <= n - 1:
        try:
            c = b1_via_circuits(sigma, a)
            methods["circuit_b1"] = c
            if c != reference.b[0]:
                disagreements.append("circuit_b1")
        except OracleLimitError as exc:
            methods["circuit_b1"] = {"skipped": str(exc)}
    else:
        methods["circuit_b1"] = {"skipped": "fold a = n has no relation space"}
    height = height_of_fold_ideal(sigma, a)
    residuals = herzog_kuhl_residuals(reference, a, height)
    if any(r != 0 for r in residuals):
        disagreements.append("herzog_kuhl")
    expected_pdim = min(ess.k, n - a + 1)
    if reference.pdim != expected_pdim:
        disagreements.append("pdim")
    entry = {
        "a": a,
        "methods": methods,
        "herzog_kuhl": list(residuals),
        "pdim": {"expected": expected_pdim, "actual": reference.pdim},
        "verdict": "agree" if not disagreements else "disagree: " + ", ".join(disagreements),
    }
    return entry, not disagreements


def _render_terms(terms):
    parts = []
    for term in terms:
        c, i, j = term["c"], term["x"], term["y"]
        piece = []
        if c != "1" or (i == 0 and j == 0):
            piece.append(c)
        if i:
            piece.append("x" if i == 1 else "x^%d" % i)
        if j:
            piece.append("y" if j == 1 else "y^%d" % j)
        parts.append("*".join(piece))
    return " + ".join(parts) if parts else "0"


def render_text(data) -> str:
    lines = [
        "instance: field=%s k=%d (effective %d) n=%d"
        % (data["instance"]["field"], data["k_original"], data["k_effective"], data["n"])
    ]
    for w in data.get("warnings", []):
        lines.append("warning: %s" % w)
    if "hamming" in data:
        lines.append("hamming weights: %s" % (data["hamming"],))
    if "heights" in data:
        for a, h in sorted(data["heights"].items(), key=lambda kv: int(kv[0])):
            lines.append("a=%s: height %d" % (a, h))
    if "tutte" in data:
        lines.append("T(x, y)      = %s" % _render_terms(data["tutte"]["terms"]))
        lines.append("T(x+1, y)    = %s" % _render_terms(data["tutte_shifted"]["terms"]))
    if "hilbert" in data:
        hf = data["hilbert"]
        for d, v in sorted(hf["hf"].items(), key=lambda kv: int(kv[0])):
            lines.append("HF(I_%d, %s) = %d" % (hf["a"], d, v))
    for entry in data.get("results", []):
        bits = ["a=%d:" % entry["a"]]
        for name, value in entry["methods"].items():
            if isinstance(value, dict) and "b" in value:
                bits.append("%s=%s" % (name, value["b"]))
            elif isinstance(value, dict):
                bits.append("%s=(skipped: %s)" % (name, value["skipped"]))
            else:
                bits.append("%s=%s" % (name, value))
        if "herzog_kuhl" in entry:
            bits.append("HK=%s" % (entry["herzog_kuhl"],))
        if "pdim" in entry:
            bits.append("pdim=%d/%d" % (entry["pdim"]["actual"], entry["pdim"]["expected"]))
        if "verdict" in entry:
            bits.append(entry["verdict"])
        lines.append("  ".join(bits))
    return "\n".join(lines) + "\n"


def _parse_degrees(text):
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    d = int(text)
    return range(d, d + 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foldbetti",
        description="Exact Betti numbers of ideals generated by fold products of linear forms.",
    )
    parser.add_argument(
        "command",
        choices=["betti", "tutte", "hamming", "height", "hilbert", "verify"],
    )
    parser.add_argument("--input", required=True, help="instance JSON file")
    parser.add_argument("--fold", type=int, help="single fold a")
    parser.add_argument("--all-folds", action="store_true", help="run every a = 1..n")
    parser.add_argument("--method", choices=list(METHODS), default="auto")
    parser.add_argument("--degrees", help="degree range D1..D2 (hilbert only)")
    parser.add_argument("--json", dest="as_json", action="store_true", help="machine output")
    parser.add_argument("--tutte-threshold", type=int, default=16)
    parser.add_argument(
        "--allow-trivial", action="store_true", help="accept folds a > n (zero ideal)"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, "rb") as handle:
            text = handle.read()
    except OSError as exc:
        print("foldbetti: cannot read %s: %s" % (args.input, exc), file=sys.stderr)
        return 1
    try:
        instance = parse_instance(text)
        folds = [args.fold] if args.fold is not None else None
        degrees = _parse_degrees(args.degrees) if args.degrees else None
        report = run(
            args.command,
            instance,
            folds=folds,
            method=args.method,
            degrees=degrees,
            tutte_threshold=args.tutte_threshold,
            allow_trivial=args.allow_trivial,
        )
    except (InstanceError, CommandError, ValueError, OracleLimitError) as exc:
        print("foldbetti: %s" % exc, file=sys.stderr)
        return 1
    sys.stdout.write(report.to_json() if args.as_json else report.to_text())
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
