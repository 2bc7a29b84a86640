"""Command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 input error, 3 internal failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .abelian_engine import GroupError, abelian_basis, max_group_order
from .blackbox import SpecError, build_group, load_table, parse_spec, save_spec
from .corpus import random_spec
from .decompose import DecompositionFailure, standard_decompose, verify_standard_decomposition
from .dlog_conj import ConjLogInstance, dlog_up_to_conjugacy
from .field_poly import ExtField, FieldElem, ext_field
from .iso import group_isomorphism, verify_isomorphism
from .matrix_forms import (
    Matrix, MatrixError, conjugator, elementary_divisors, invariant_factors, mat_order, similar,
)
from .quantum_sim import ShorFailure, SizeGuard, hsp_recover, shor_order
from .setdlog import FieldMultiset, set_discrete_log

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunReport:
    subcommand: str
    inputs: dict
    verdict: str = ""
    certificate: Any = None
    verified: bool | None = None
    wall_time: float = 0.0
    lines: list = field(default_factory=list)

    def say(self, text: str = "") -> None:
        self.lines.append(text)
        print(text)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def _content_lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def _ints(tokens) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InputError(f"expected integers, got {' '.join(tokens)!r}") from None


def parse_matrices(text: str) -> list[Matrix]:
    """Concatenated matrices: a header line "p r", then r lines of r integers."""
    lines = _content_lines(text)
    mats = []
    i = 0
    while i < len(lines):
        head = _ints(lines[i])
        if len(head) != 2:
            raise InputError(f"matrix header must be 'p r', got {' '.join(lines[i])!r}")
        p, r = head
        rows = [_ints(ln) for ln in lines[i + 1:i + 1 + r]]
        if len(rows) != r or any(len(row) != r for row in rows):
            raise InputError(f"matrix {len(mats) + 1}: expected {r} rows of {r} integers")
        try:
            mats.append(Matrix.from_ints(p, rows))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        i += 1 + r
    return mats


def format_matrix(M: Matrix) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in M.to_ints())


def _parse_elem(F, token: str) -> FieldElem:
    parts = _ints(token.split(","))
    if F.d == 1:
        if len(parts) != 1:
            raise InputError(f"prime-field element expected, got {token!r}")
        return FieldElem(F, parts[0] % F.p)
    if len(parts) != F.d:
        raise InputError(f"element {token!r} needs {F.d} comma-separated coefficients")
    return FieldElem(F, F.coerce(parts))


def parse_setdlog(text: str) -> tuple[list[FieldMultiset], list[FieldMultiset], list]:
    """Blocks of three lines: "p d [modulus]", the elements of S_h, the elements of T_h.

    Extension-field elements are comma-separated coefficient lists, lowest degree
    first, over GF(p)[x]/(modulus); without a modulus the package's canonical
    irreducible polynomial of degree d is used.
    """
    lines = _content_lines(text)
    if len(lines) % 3:
        raise InputError("setdlog file must consist of blocks of three lines")
    S_list, T_list, fields = [], [], []
    for b in range(0, len(lines), 3):
        head = lines[b]
        if len(head) not in (2, 3):
            raise InputError(f"block header must be 'p d [modulus]', got {' '.join(head)!r}")
        p, d = _ints(head[:2])
        try:
            if len(head) == 3:
                F = ExtField(p, _ints(head[2].split(","))) if d > 1 else ext_field(p, 1)
                if F.d != d:
                    raise InputError(f"modulus degree does not match d = {d}")
            else:
                F = ext_field(p, d)
            S = FieldMultiset([_parse_elem(F, t) for t in lines[b + 1]], F)
            T = FieldMultiset([_parse_elem(F, t) for t in lines[b + 2]], F)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        S_list.append(S)
        T_list.append(T)
        fields.append(F)
    return S_list, T_list, fields


def load_group(path: str, seed_override: int | None = None):
    """A spec file (``key = value`` lines) or a multiplication-table file."""
    text = Path(path).read_text()
    if "=" in text:
        spec = parse_spec(text)
        if seed_override is not None:
            spec = spec.with_seed(seed_override)
        spec.validate()
        if spec.order > max_group_order():
            raise InputError(f"|G| = {spec.order} exceeds GRPISO_MAX_GROUP_ORDER = {max_group_order()}")
        return build_group(spec)
    return load_table(path, seed_override or 0)


def write_certificate(path: str, H, gen_images: list) -> None:
    with open(path, "w") as fh:
        for i, h in enumerate(gen_images):
            fh.write(f"{i} -> {h.hex()}\n")


def read_certificate(path: str) -> list[bytes]:
    images = {}
    for ln in Path(path).read_text().splitlines():
        if not ln.strip():
            continue
        try:
            left, right = ln.split("->")
            images[int(left)] = bytes.fromhex(right.strip())
        except ValueError:
            raise InputError(f"malformed certificate line {ln!r}") from None
    if sorted(images) != list(range(len(images))):
        raise InputError("certificate must list every generator index once")
    return [images[i] for i in range(len(images))]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _csv_ints(text: str) -> list[int]:
    return _ints(t for t in text.replace(",", " ").split())


def cmd_gen(args, rep: RunReport, rng: random.Random) -> int:
    orders = _csv_ints(args.abelian)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = rng.randrange(1, 2**31) if args.scramble else 0
        spec = random_spec(orders, args.m, rng, seed)
        path = out / f"{args.prefix}{i:04d}.spec"
        save_spec(spec, path)
        rep.say(str(path))
    rep.verdict = f"wrote {args.count} specs"
    return EXIT_OK


def cmd_decompose(args, rep: RunReport, rng: random.Random) -> int:
    G = load_group(args.spec)
    try:
        sd = standard_decompose(G, verify=False, seed=args.seed)
    except GroupError as exc:
        rep.verdict = "FAIL"
        rep.say(f"decomposition failed: {exc}")
        return EXIT_NEGATIVE
    ok = verify_standard_decomposition(G, sd)
    rep.say(f"m = {sd.m}")
    if not ok:
        rep.say("verification: FAILED (not in class S, or procedure failure)")
        rep.verdict = "UNVERIFIED"
        rep.verified = False
        return EXIT_NEGATIVE
    B = abelian_basis(sd.A_gens, G)
    rep.say(f"|G| = {B.size * sd.m}")
    rep.say(f"|A| = {B.size}")
    rep.say(f"A basis orders = {list(B.orders)}")
    rep.say("verification: OK")
    rep.verdict = "VERIFIED"
    rep.verified = True
    rep.certificate = {"A_orders": list(B.orders), "m": sd.m}
    return EXIT_OK


def cmd_iso(args, rep: RunReport, rng: random.Random) -> int:
    G, H = load_group(args.spec_a), load_group(args.spec_b)
    if args.check:
        images = read_certificate(args.check)
        ok = verify_isomorphism(G, H, images)
        rep.verdict = "CERTIFICATE-OK" if ok else "CERTIFICATE-INVALID"
        rep.verified = ok
        rep.say(rep.verdict)
        return EXIT_OK if ok else EXIT_NEGATIVE
    try:
        res = group_isomorphism(G, H)
    except DecompositionFailure as exc:
        rep.verdict = "FAIL"
        rep.say(f"FAIL: {exc}")
        return EXIT_INTERNAL
    rep.verdict = res.verdict
    rep.say(f"{res.verdict}: {res.reason}")
    if res.isomorphic:
        rep.verified = verify_isomorphism(G, H, res.iso)
        rep.certificate = {"k": res.iso.k, "gen_images": [h.hex() for h in res.iso.gen_images]}
        rep.say(f"verification: {'OK' if rep.verified else 'FAILED'}")
        if args.emit:
            write_certificate(args.emit, H, res.iso.gen_images)
            rep.say(f"generator images written to {args.emit}")
        return EXIT_OK if rep.verified else EXIT_INTERNAL
    return EXIT_NEGATIVE if res.isomorphic is False else EXIT_INTERNAL


def cmd_setdlog(args, rep: RunReport, rng: random.Random) -> int:
    S_list, T_list, fields = parse_setdlog(Path(args.file).read_text())
    backend = args.backend
    sol = set_discrete_log(S_list, T_list, backend=backend, rng=rng)
    if sol is None:
        rep.verdict = "NONE"
        rep.say("NONE")
        return EXIT_NEGATIVE
    rep.verdict = "SOLVED"
    rep.verified = True
    members = sol.members()
    rep.certificate = {"k": sol.representative, "modulus": sol.modulus, "members": members}
    rep.say(f"k = {sol.representative}")
    rep.say(f"solutions mod {sol.modulus}: {' '.join(map(str, members))}")
    return EXIT_OK


def cmd_conjlog(args, rep: RunReport, rng: random.Random) -> int:
    mats = parse_matrices(Path(args.file).read_text())
    if not mats or len(mats) % 2:
        raise InputError("conjlog file must hold an even, nonzero number of matrices")
    try:
        inst = ConjLogInstance([(mats[i], mats[i + 1]) for i in range(0, len(mats), 2)])
    except MatrixError as exc:
        raise InputError(str(exc)) from None
    sol = dlog_up_to_conjugacy(inst)
    if sol is None:
        rep.verdict = "NONE"
        rep.say("NONE")
        return EXIT_NEGATIVE
    rep.verdict = "SOLVED"
    rep.verified = sol.verify(inst)
    rep.say(f"k = {sol.k}")
    rep.say(f"all solutions mod {sol.coset.modulus}: {' '.join(map(str, sol.coset.members()))}")
    for h, X in enumerate(sol.X_list):
        rep.say(f"X[{h}] =")
        rep.say(format_matrix(X))
    rep.certificate = {"k": sol.k, "X": [X.to_ints() for X in sol.X_list]}
    return EXIT_OK if rep.verified else EXIT_INTERNAL


def _poly_str(f) -> str:
    return ",".join(map(str, f.to_ints()))


def cmd_matform(args, rep: RunReport, rng: random.Random) -> int:
    mats = parse_matrices(Path(args.file).read_text())
    if not mats or len(mats) > 2:
        raise InputError("matform takes one matrix, or two for a similarity test")
    for idx, M in enumerate(mats):
        if not M.is_invertible():
            raise InputError(f"matrix {idx + 1} is singular")
        rep.say(f"matrix {idx + 1}: GF({M.field.p}), r = {M.r}, order = {mat_order(M)}")
        rep.say("  invariant factors (coefficients, lowest degree first):")
        for a in invariant_factors(M):
            rep.say(f"    {_poly_str(a)}")
        rep.say("  elementary-divisor roots by (d, l):")
        for key, roots in sorted(elementary_divisors(M).items()):
            rep.say(f"    {key}: {' '.join(map(repr, roots))}")
    if len(mats) == 2:
        M1, M2 = mats
        if similar(M1, M2):
            X = conjugator(M1, M2)
            rep.verdict = "SIMILAR"
            rep.verified = X * M1 == M2 * X
            rep.say("SIMILAR; X with X M1 = M2 X:")
            rep.say(format_matrix(X))
        else:
            rep.verdict = "NOT-SIMILAR"
            rep.say("NOT-SIMILAR")
            return EXIT_NEGATIVE
    else:
        rep.verdict = "OK"
    return EXIT_OK


def cmd_quantum_demo(args, rep: RunReport, rng: random.Random) -> int:
    N, a = args.N, args.a
    rep.say(f"order finding for a = {a} mod N = {N}")
    transcript: list = []
    try:
        r = shor_order(a, N, rng, transcript=transcript)
    except (ShorFailure, SizeGuard, ValueError) as exc:
        for step in transcript:
            rep.say(f"  attempt {step['attempt']}: measured {step['measured']}/{step['Q']}, "
                    f"denominators {step['denominators']}, candidate {step['candidate']}")
        if isinstance(exc, ShorFailure):
            rep.verdict = "FAIL"
            rep.say(f"FAIL: {exc}")
            return EXIT_INTERNAL
        raise InputError(str(exc)) from None
    for step in transcript:
        rep.say(f"  attempt {step['attempt']}: measured {step['measured']}/{step['Q']}, "
                f"denominators {step['denominators']}, candidate {step['candidate']}")
    rep.say(f"order = {r} (verified: {pow(a, r, N) == 1})")
    orders = _csv_ints(args.hsp_orders)
    hidden = _csv_ints(args.hsp_hidden)
    if len(hidden) != len(orders):
        raise InputError("--hsp-hidden must have one entry per --hsp-orders entry")

    def f(x):
        # label of the coset x + <hidden>
        best, cur = tuple(x), tuple(x)
        for _ in range(max(orders) if orders else 1):
            cur = tuple((c + h) % n for c, h, n in zip(cur, hidden, orders))
            best = min(best, cur)
        return best
    gens = hsp_recover(orders, f, rng)
    rep.say(f"hidden subgroup over Z{tuple(orders)} planted by {tuple(hidden)}: recovered generators {gens}")
    rep.verdict = "OK"
    rep.certificate = {"order": r, "hsp_generators": gens}
    return EXIT_OK


def cmd_selftest(args, rep: RunReport, rng: random.Random) -> int:
    from .acceptance import run_all
    numbers = _csv_ints(args.only) if args.only else None
    results = run_all(numbers, seed=args.seed, inject_fault=args.inject_fault, echo=rep.say)
    failed = [r.number for r in results if not r.passed]
    rep.verdict = "PASS" if not failed else f"FAIL {failed}"
    rep.say(f"selftest: {len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_NEGATIVE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grpiso", description="Isomorphism testing for groups A x| Z_m with gcd(|A|, m) = 1.")
    ap.add_argument("--seed", type=int, default=0, help="seed for every randomized component")
    ap.add_argument("--report", metavar="PATH", help="write a JSON run report")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="write random group spec files")
    p.add_argument("--abelian", required=True, help="cyclic orders of A, e.g. 3,3,3,3")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", default=".")
    p.add_argument("--prefix", default="group_")
    p.add_argument("--scramble", action="store_true", help="give each spec a random scramble seed")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", help="standard decomposition of a group")
    p.add_argument("spec")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("iso", help="decide isomorphism of two groups")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--emit", metavar="PATH", help="write generator images as 'gen_index -> encoding' lines")
    p.add_argument("--check", metavar="PATH", help="verify a previously emitted certificate instead")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("setdlog", help="set discrete logarithm")
    p.add_argument("file")
    p.add_argument("--backend", choices=["brute", "hsp"], default="brute")
    p.set_defaults(func=cmd_setdlog)

    p = sub.add_parser("conjlog", help="discrete logarithm up to conjugacy")
    p.add_argument("file")
    p.set_defaults(func=cmd_conjlog)

    p = sub.add_parser("matform", help="canonical forms of one matrix, or similarity of two")
    p.add_argument("file")
    p.set_defaults(func=cmd_matform)

    p = sub.add_parser("quantum-demo", help="simulated order finding and hidden subgroup recovery")
    p.add_argument("--N", type=int, default=21)
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--hsp-orders", default="4,2")
    p.add_argument("--hsp-hidden", default="2,1")
    p.set_defaults(func=cmd_quantum_demo)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--inject-fault", action="store_true", help="corrupt a solver to check that failures are caught")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rng = random.Random(args.seed)
    inputs = {k: v for k, v in vars(args).items() if k not in ("func",)}
    rep = RunReport(args.cmd, inputs)
    t0 = time.perf_counter()
    try:
        code = args.func(args, rep, rng)
    except (InputError, SpecError, MatrixError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        rep.verdict = "INPUT-ERROR"
        code = EXIT_INPUT
    except Exception as exc:  # stable contract: anything unexpected is an internal failure
        print(f"internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        rep.verdict = "INTERNAL-FAILURE"
        code = EXIT_INTERNAL
    rep.wall_time = time.perf_counter() - t0
    if args.report:
        Path(args.report).write_text(json.dumps(asdict(rep), indent=2, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
