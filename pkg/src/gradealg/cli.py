"""
Command-line front end.

Exit codes: 0 when a verdict was computed (even a negative one), 2 for usage and computation errors,
3 when an input file cannot be read.
"""

from __future__ import annotations

from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple
import argparse
import logging
import sys
import time

import numpy as np

from . import __version__
from .algebra import Element, GradedAlgebra, describe_degree, is_graded_homomorphism, is_injective, validate
from .constructions import (
    cyclic_polynomial_quotient,
    direct_sum,
    k_plus_ck,
    poly_quotient,
    tensor_trivial,
    twisted_group_algebra,
    twisted_z2z2,
    wall_fixture,
)
from .errors import GradealgError, NotBetaCommutative, UndeterminedBicharacter, UsageError
from .galg import load_algebra, load_cocycle, load_elements, parse_elements, save_algebra, serialize_algebra
from .grassmann import (
    EnvelopeSpec,
    blade_products_batch,
    envelope,
    materialize,
    naive_blade_product,
    random_blades,
    truncation_bound,
)
from .groups import FiniteAbelianGroup, GroupElement, format_element
from .identities import (
    compare_identity_spaces,
    evaluate,
    format_polynomial,
    grassmann_t_ideal_generators,
    identity_space,
    is_graded_identity,
    parse_polynomial,
    satisfies_grassmann_identities,
)
from .linalg import format_scalar
from .radical import jacobson_radical, nilpotency_index
from .regularity import (
    KRegularity,
    decomposition_matrix,
    extract_bicharacter,
    infinite_dim_obligations,
    is_k_regular,
    is_strongly_regular,
    permutation_conjugate,
    regularity_report,
    verify_bicharacter_axioms,
)
from .report import Report
from .steps import set_step_logging
from .structure import build_chain, classify_subalgebra, embed_grassmann, variety_equivalence_check

logger = logging.getLogger(__name__)

LOG_FORMAT = "[%(asctime)s][%(levelname)-7s][%(name)s %(lineno)3d] %(message)s"
LOG_DATEFMT = "%H:%M:%S"

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_FILE = 3

Outcome = Tuple[Dict[str, Any], List[str]]


def parse_pattern(text: str, group: FiniteAbelianGroup) -> List[GroupElement]:
    """``1,1,0`` for Z2 (one component per entry), ``0,1;1,1`` when the group has several factors."""
    text = text.strip()
    if not text:
        return []
    parts = text.split(",") if len(group.factor_orders) == 1 else text.split(";")
    pattern = []
    for part in parts:
        try:
            comps = tuple(int(c) for c in part.split(","))
        except ValueError:
            raise UsageError(f"bad degree pattern {text!r}") from None
        if len(comps) != len(group.factor_orders) or any(not 0 <= c < n for c, n in zip(comps, group.factor_orders)):
            raise UsageError(f"bad degree pattern {text!r}: {part.strip()!r} is not an element of {group}")
        pattern.append(group.element(comps))
    return pattern


def _format_pattern(pattern: Sequence[GroupElement]) -> str:
    return "(" + ", ".join(format_element(g) for g in pattern) + ")"


def _labels(elements: Optional[Sequence[Element]]) -> Optional[List[str]]:
    return None if elements is None else [str(e) for e in elements]


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


# ---------------------------------------------------------------------------------------------------------------
# commands


def _cmd_validate(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input, check=False)
    report = validate(algebra)
    lines = [f"{algebra.name}: dim {algebra.dim}, group {algebra.group}"]
    failure = report.first_failure()
    lines.append("valid" if failure is None else f"invalid: {failure[0]} fails at {failure[1]}")
    return report.to_dict(), lines


def _cmd_check_regular(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    levels: List[KRegularity] = []
    summary: List[str] = []
    if args.tuple:
        tuples = [parse_pattern(t, algebra.group) for t in args.tuple]
        by_length: Dict[int, List[List[GroupElement]]] = {}
        for t in tuples:
            by_length.setdefault(len(t), []).append(t)
        for k, chosen in sorted(by_length.items()):
            levels.append(is_k_regular(algebra, k, chosen))
        verdicts: Dict[str, Any] = {"algebra": algebra.name, "k_regularity": [level.to_dict() for level in levels]}
    else:
        if args.k < 1:
            raise UsageError("--k must be >= 1")
        report = regularity_report(algebra, args.k)
        levels = report.k_regularity
        verdicts = report.to_dict()
        summary.append(f"regular up to k = {report.regular_up_to()} (checked {args.k})")
        if report.strongly_regular is not None:
            summary.append(f"strongly regular: {_yes(report.strongly_regular)}")
    lines: List[str] = []
    for level in levels:
        lines.append(f"{level.k}-regular: {_yes(level.regular)}")
        for t in level.failures[:5]:
            lines.append(f"  no witness for {_format_pattern(t)}")
    return verdicts, lines + summary


def _cmd_bicharacter(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    try:
        beta = extract_bicharacter(algebra)
    except (NotBetaCommutative, UndeterminedBicharacter) as exc:
        return {"algebra": algebra.name, "bicharacter": None, "failure": f"{type(exc).__name__}: {exc}"}, [
            f"no bicharacter: {exc}"
        ]
    axioms = verify_bicharacter_axioms(beta)
    obligations = infinite_dim_obligations(beta)
    lines = [f"beta({format_element(g)}, {format_element(h)}) = {format_scalar(v)}" for (g, h), v in beta.table.items()]
    lines.append(f"axioms: {'hold' if axioms.holds else 'violated'}")
    lines += [f"  {v}" for v in axioms.violations]
    if obligations:
        lines.append(
            "beta(h, h) = -1 for h in "
            + ", ".join(format_element(h) for h in obligations)
            + ": a fully regular algebra with this beta is infinite-dimensional, "
            "so a finite-dimensional one is only k-regular for bounded k"
        )
    verdicts = {
        "algebra": algebra.name,
        "bicharacter": beta.to_dict(),
        "axioms_hold": axioms.holds,
        "violations": axioms.violations,
        "infinite_dim_obligations": [format_element(h) for h in obligations],
    }
    return verdicts, lines


def _cmd_matrix(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    decomposition = decomposition_matrix(extract_bicharacter(algebra))
    rows = decomposition.matrix.to_rows()
    lines = ["M = [" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in rows) + "]"]
    lines.append(f"det = {decomposition.determinant}")
    lines.append(f"minimal = {str(decomposition.minimal).lower()}")
    verdicts: Dict[str, Any] = {
        "algebra": algebra.name,
        "elements": [format_element(g) for g in algebra.group.elements()],
        "matrix": [[format_scalar(x) for x in row] for row in rows],
        "determinant": format_scalar(decomposition.determinant),
        "minimal": decomposition.minimal,
    }
    if args.compare:
        other = load_algebra(args.compare)
        other_matrix = decomposition_matrix(extract_bicharacter(other)).matrix
        permutation = permutation_conjugate(decomposition.matrix, other_matrix)
        verdicts["conjugate"] = permutation is not None
        verdicts["permutation"] = permutation
        lines.append(f"conjugate to {other.name}: {_yes(permutation is not None)}")
    return verdicts, lines


def _cmd_strong_regular(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    verdict = is_strongly_regular(algebra)
    lines = [f"strongly regular: {_yes(verdict.strongly_regular)}"]
    if verdict.witness is not None:
        lines.append(f"  {verdict.witness} annihilates the odd part")
    witness = str(verdict.witness) if verdict.witness is not None else None
    return {"algebra": algebra.name, "strongly_regular": verdict.strongly_regular, "witness": witness}, lines


def _cmd_radical(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    radical = jacobson_radical(algebra)
    indices = [nilpotency_index(x) for x in radical.space.basis()]
    components = {format_element(g): radical.component_dim(g) for g in algebra.group.elements()}
    lines = [f"dim J = {radical.dim}"]
    lines += [f"  degree {g}: {d}" for g, d in components.items()]
    lines.append(f"basis elements nilpotent: {_yes(all(indices))}")
    verdicts = {
        "algebra": algebra.name,
        "dim": radical.dim,
        "components": components,
        "basis": [str(x) for x in radical.space.basis()],
        "nilpotency_indices": indices,
    }
    return verdicts, lines


def _cmd_identities(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    if args.eval is not None and not args.poly:
        raise UsageError("--eval needs --poly")
    if args.generators_grassmann:
        grassmann = satisfies_grassmann_identities(algebra)
        lines: List[str] = []
        for f in grassmann_t_ideal_generators():
            if f == grassmann.failing:
                lines.append(f"{format_polynomial(f)}: fails")
                lines.append(f"  counterexample {tuple(_labels(grassmann.counterexample) or ())}")
                break
            lines.append(f"{format_polynomial(f)}: holds")
        return {
            "algebra": algebra.name,
            "all_hold": grassmann.holds,
            "failing": format_polynomial(grassmann.failing) if grassmann.failing is not None else None,
            "counterexample": _labels(grassmann.counterexample),
        }, lines
    if args.poly:
        f = parse_polynomial(args.poly)
        if args.eval is not None:
            values = parse_elements(args.eval.replace(";", "\n"), algebra)
            value = evaluate(f, algebra, values)
            lines = [f"{format_polynomial(f)} at ({', '.join(str(v) for v in values)}) = {value}"]
            lines.append(f"  degree {describe_degree(value.degree())}")
            return {
                "algebra": algebra.name,
                "polynomial": format_polynomial(f),
                "assignment": _labels(values),
                "value": str(value),
                "degree": describe_degree(value.degree()),
            }, lines
        verdict = is_graded_identity(algebra, f)
        lines = [f"{format_polynomial(f)}: {'holds' if verdict.holds else 'fails'}"]
        if verdict.counterexample is not None:
            lines.append(f"  counterexample {verdict.counterexample_labels()} -> {verdict.value}")
        return {
            "algebra": algebra.name,
            "polynomial": format_polynomial(f),
            "holds": verdict.holds,
            "counterexample": verdict.counterexample_labels(),
            "value": str(verdict.value) if verdict.value is not None else None,
        }, lines
    if args.space:
        if not args.pattern:
            raise UsageError("--space needs --pattern")
        pattern = parse_pattern(args.pattern, algebra.group)
        space = identity_space(algebra, pattern)
        lines = [f"identity space at {_format_pattern(pattern)} has dim {len(space)}"]
        lines += [f"  {format_polynomial(f)}" for f in space]
        return {
            "algebra": algebra.name,
            "pattern": [format_element(g) for g in pattern],
            "dim": len(space),
            "basis": [format_polynomial(f) for f in space],
        }, lines
    if args.compare:
        other = load_algebra(args.compare)
        comparison = compare_identity_spaces(algebra, other, args.degree)
        return comparison.to_dict(), [f"{algebra.name} vs {other.name}: {comparison.verdict}"]
    raise UsageError("identities needs one of --generators-grassmann, --poly, --space or --compare")


def _cmd_envelope(args: argparse.Namespace) -> Outcome:
    c = load_algebra(args.c)
    lines: List[str] = []
    n = args.n
    if args.degree is not None:
        n = truncation_bound(args.degree, c)
        lines.append(f"identities of degree <= {args.degree} are decided in E_{n}")
    algebra = envelope(EnvelopeSpec(c, n))
    lines.append(f"{algebra.name}: dim {algebra.dim}")
    if args.out:
        save_algebra(algebra, args.out)
        lines.append(f"wrote {args.out}")
    else:
        lines.append(serialize_algebra(algebra).rstrip("\n"))
    dims = {format_element(g): d for g, d in algebra.component_dims().items()}
    return {"algebra": algebra.name, "n": n, "dim": algebra.dim, "component_dims": dims, "out": args.out}, lines


def _cmd_embed(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    embedding = embed_grassmann(algebra, args.n)
    homomorphism = is_graded_homomorphism(embedding)
    injective = is_injective(embedding)
    images = {label: str(img) for label, img in zip(embedding.source.basis_labels, embedding.images)}
    kind = "graded homomorphism" if homomorphism.holds else f"not a graded homomorphism ({homomorphism.reason})"
    lines = [f"E_{args.n} -> {algebra.name}: {'injective' if injective else 'non-injective'} {kind}"]
    lines += [f"  {label} -> {img}" for label, img in images.items()]
    verdicts = {
        "algebra": algebra.name,
        "n": args.n,
        "images": images,
        "homomorphism": homomorphism.holds,
        "injective": injective,
    }
    return verdicts, lines


def _cmd_chain(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    chain = build_chain(algebra, args.nmax)
    lines = [f"F_{s.n}: dim {s.f_n.dim}, generators {', '.join(str(g) for g in s.generators)}" for s in chain.stages]
    lines.append(f"{len(chain.maps)} maps and {chain.checked_triples} composition triples verified")
    return {"algebra": algebra.name, **chain.to_dict()}, lines


def _cmd_classify(args: argparse.Namespace) -> Outcome:
    algebra = load_algebra(args.input)
    generators = load_elements(args.generators, algebra)
    report = classify_subalgebra(algebra, generators)
    lines = [
        f"Type {report.type_tag}: n={report.n} q={report.q} l={report.l} r={report.r} "
        f"leftover_dim={report.leftover_dim} t_blocks={report.t_blocks}"
    ]
    lines += [f"  removed {g}" for g in report.removed]
    return {"algebra": algebra.name, **report.to_dict()}, lines


def _cmd_variety_check(args: argparse.Namespace) -> Outcome:
    c = load_algebra(args.input)
    verdict = variety_equivalence_check(c)
    doc = verdict.to_dict()
    lines = [f"{key}: {value}" for key, value in doc.items()]
    return doc, lines


def _fixture(kind: str, params: List[str]) -> GradedAlgebra:
    def ints(count: int) -> List[int]:
        if len(params) != count:
            raise UsageError(f"fixture {kind} needs {count} integer parameter(s), got {params}")
        try:
            return [int(p) for p in params]
        except ValueError:
            raise UsageError(f"fixture {kind} needs integer parameters, got {params}") from None

    if kind == "grassmann":
        return materialize(*ints(1))
    if kind == "wall-a1":
        return wall_fixture("A1", n=ints(1)[0])
    if kind == "wall-a2":
        k, l = ints(2)
        return wall_fixture("A2", k=k, l=l)
    if kind == "wall-a3":
        return wall_fixture("A3", n=ints(1)[0])
    if kind == "group-algebra":
        if params != ["z2"]:
            raise UsageError("only 'group-algebra z2' is available")
        return k_plus_ck(1)
    if kind == "twisted-z2z2":
        ints(0)
        return twisted_z2z2()
    if kind == "poly-quotient":
        return poly_quotient(*ints(1))
    if kind == "cyclic-poly":
        return cyclic_polynomial_quotient(*ints(2))
    if kind == "direct-sum":
        if len(params) != 2:
            raise UsageError("fixture direct-sum needs two algebra files")
        return direct_sum(load_algebra(params[0]), load_algebra(params[1]))
    if kind == "tensor-trivial":
        if len(params) != 2:
            raise UsageError("fixture tensor-trivial needs two algebra files, the second trivially graded")
        return tensor_trivial(load_algebra(params[0]), load_algebra(params[1]))
    if kind == "twisted-group-algebra":
        if len(params) != 2:
            raise UsageError("fixture twisted-group-algebra needs a group such as Z2xZ2 and a cocycle file")
        group = FiniteAbelianGroup.parse(params[0])
        return twisted_group_algebra(group, load_cocycle(params[1], group))
    raise UsageError(f"unknown fixture kind {kind!r}")


def _cmd_fixture(args: argparse.Namespace) -> Outcome:
    params = ([str(args.n)] if args.n is not None else []) + list(args.params)
    algebra = _fixture(args.kind, params)
    lines = [f"{algebra.name}: dim {algebra.dim}"]
    if args.out:
        save_algebra(algebra, args.out)
        lines.append(f"wrote {args.out}")
    else:
        lines = [serialize_algebra(algebra).rstrip("\n")]
    verdicts = {"kind": args.kind, "params": params, "algebra": algebra.name, "dim": algebra.dim, "out": args.out}
    return verdicts, lines


def _cmd_bench(args: argparse.Namespace) -> Outcome:
    rng = np.random.default_rng(args.seed)
    batch = max(args.terms, 1)
    done = 0
    elapsed = 0.0
    nonzero = 0
    while done < args.products:
        size = min(batch, args.products - done)
        a = random_blades(rng, args.n, size)
        b = random_blades(rng, args.n, size)
        start = time.perf_counter()
        signs, _ = blade_products_batch(a, b)
        elapsed += time.perf_counter() - start
        nonzero += int(np.count_nonzero(signs))
        done += size
    a = random_blades(rng, args.n, args.sample)
    b = random_blades(rng, args.n, args.sample)
    signs, masks = blade_products_batch(a, b)
    mismatches = 0
    for x, y, s, m in zip(a.tolist(), b.tolist(), signs.tolist(), masks.tolist()):
        expected = naive_blade_product(int(x), int(y))
        got = None if s == 0 else (s, m)
        if expected != got:
            mismatches += 1
    lines = [
        f"{done} blade products in E_{args.n}: {elapsed:.3f} s ({done / elapsed if elapsed else float('inf'):.0f}/s)",
        f"naive oracle: {mismatches} mismatches on {args.sample} samples",
    ]
    verdicts = {
        "n": args.n,
        "products": done,
        "nonzero": nonzero,
        "sample": args.sample,
        "mismatches": mismatches,
        "seconds": round(elapsed, 6),
    }
    return verdicts, lines


COMMANDS: Dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "validate": _cmd_validate,
    "check-regular": _cmd_check_regular,
    "bicharacter": _cmd_bicharacter,
    "matrix": _cmd_matrix,
    "strong-regular": _cmd_strong_regular,
    "radical": _cmd_radical,
    "identities": _cmd_identities,
    "envelope": _cmd_envelope,
    "embed": _cmd_embed,
    "chain": _cmd_chain,
    "classify": _cmd_classify,
    "variety-check": _cmd_variety_check,
    "fixture": _cmd_fixture,
    "bench": _cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the machine-readable report to PATH")
    common.add_argument("--timings", action="store_true", help="include timings in the report")
    common.add_argument("--log-level", default="WARNING", help="logging level (default: WARNING)")
    common.add_argument("--log-steps", action="store_true", help="log verification step start/end")

    parser = argparse.ArgumentParser(prog="gradealg", description="Exact computations with graded algebras.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, help_text: str, input_file: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        if input_file:
            p.add_argument("--input", required=True, help=".galg algebra file")
        return p

    command("validate", "check the grading law, associativity and the unit")
    p = command("check-regular", "k-regularity with witnesses")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--tuple", action="append", help="explicit degree tuple, e.g. 1,1,1 (repeatable)")
    command("bicharacter", "extract beta and check the bicharacter axioms")
    p = command("matrix", "decomposition matrix, determinant and minimality")
    p.add_argument("--compare", metavar="FILE", help="test permutation conjugacy with another algebra's matrix")
    command("strong-regular", "strong regularity of a Z2-graded algebra")
    command("radical", "Jacobson radical")
    p = command("identities", "graded polynomial identities")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--generators-grassmann", action="store_true")
    mode.add_argument("--poly", metavar="LITERAL")
    mode.add_argument("--space", action="store_true")
    mode.add_argument("--compare", metavar="FILE")
    p.add_argument("--pattern", help="degree pattern for --space, e.g. 1,1")
    p.add_argument("--degree", type=int, default=3, help="maximal degree for --compare")
    p.add_argument("--eval", metavar="ELEMENTS", help="with --poly: evaluate at 'e1;e2', one element per variable")
    p = command("envelope", "Grassmann envelope E_N(C)", input_file=False)
    p.add_argument("--c", required=True, metavar="FILE")
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=int)
    size.add_argument("--degree", type=int, help="pick the N that decides identities up to this degree")
    p.add_argument("--out", metavar="FILE")
    p = command("embed", "embed E_n into the algebra")
    p.add_argument("--n", type=int, required=True)
    p = command("chain", "F_1 ... F_nmax and the direct system maps")
    p.add_argument("--nmax", type=int, required=True)
    p = command("classify", "Types I-IV of a finitely generated subalgebra")
    p.add_argument("--generators", required=True, metavar="FILE", help="one element expression per line")
    command("variety-check", "variety equivalence surrogates for C")
    p = command("fixture", "write a fixture algebra", input_file=False)
    p.add_argument(
        "kind",
        choices=[
            "grassmann", "wall-a1", "wall-a2", "wall-a3", "group-algebra", "twisted-z2z2",
            "poly-quotient", "cyclic-poly", "direct-sum", "tensor-trivial", "twisted-group-algebra",
        ],
    )
    p.add_argument("params", nargs="*")
    p.add_argument("--n", type=int, help="size parameter, the same as a leading positional one")
    p.add_argument("--out", metavar="FILE")
    p = command("bench", "blade product kernel benchmark", input_file=False)
    p.add_argument("target", choices=["blades"])
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--terms", type=int, default=10000, help="blades per batch")
    p.add_argument("--products", type=int, default=1_000_000)
    p.add_argument("--sample", type=int, default=10000, help="products checked against the naive oracle")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _configure_logging(level_name: str) -> None:
    level = logging.getLevelName(level_name.upper())
    if not isinstance(level, int):
        raise UsageError(f"unknown log level {level_name!r}")
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=LOG_DATEFMT)


def run_command(argv: Sequence[str]) -> Report:
    """Parse ``argv``, run the command and return its report."""
    args = build_parser().parse_args(list(argv))
    _configure_logging(args.log_level)
    if args.log_steps:
        set_step_logging(True)
    start = time.perf_counter()
    verdicts, lines = COMMANDS[args.command](args)
    elapsed = time.perf_counter() - start
    timings = {"total_seconds": elapsed} if args.timings or args.command == "bench" else None
    report = Report(command=args.command, argv=list(argv), verdicts=verdicts, timings=timings)
    for line in lines:
        print(line)
    if args.json:
        report.write(args.json)
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        run_command(argv)
    except GradealgError as exc:
        print(f"gradealg: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        name = getattr(exc, "filename", None) or ""
        print(f"gradealg: cannot read {name}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_FILE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
