"""Command-line front end.

Every command builds a report dictionary and prints it either as text or
as canonical JSON (sorted keys, fixed indentation).  Exit codes: 0 on
success, 2 for user errors, 3 when a resource guard trips, 4 when an
internal identity check fails.
"""

from __future__ import annotations

import hashlib
import json
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import click

from . import __version__
from .families import (
    GENERALITY_FAMILIES,
    FamilyError,
    FamilyId,
    IdentityError,
    ResourceError,
    SDSCoefficients,
    all_families,
    apply_conditions,
    check_generality,
    check_membership,
    generic_f,
    param_dim,
    run_chain,
)
from .links import LINKS, concrete_values, get_link, replay_flop_wall, replay_kawakita, replay_strict_transform, replay_walk
from .poly import ParseError, Poly, PolyError, VarTable, parse
from .singularity import classify_cAn
from .splitting import iterated_split, split
from .toric import BoundExceeded, bidegree, parse_link_file, strict_transform, variety_anticanonical, walk_link

EXIT_USER = 2
EXIT_RESOURCE = 3
EXIT_IDENTITY = 4

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def infer_table(text: str, order: str | None = None) -> VarTable:
    """Variables in order of first appearance, or as listed in ``order``."""
    if order:
        return VarTable.of(order.replace(",", " ").split())
    seen: list[str] = []
    for name in _IDENT.findall(text):
        if name not in seen:
            seen.append(name)
    return VarTable.of(seen)


def read_input(source: str | None) -> str:
    if source in (None, "-"):
        return sys.stdin.read()
    try:
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise Failure(EXIT_USER, f"cannot read {source}: {exc.strerror}") from None


def strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def emit(command: str, inputs: Sequence[str], results: dict, fmt: str, text: Callable[[dict], str],
         timing: float | None) -> None:
    digest = hashlib.sha256("\0".join(inputs).encode()).hexdigest()
    report = {"command": command, "inputs_digest": digest, "results": results, "version": __version__}
    if timing is not None:
        report["timing_seconds"] = round(timing, 6)
    if fmt == "json":
        click.echo(json.dumps(report, sort_keys=True, indent=2, default=str))
    else:
        click.echo(text(results))


def run(command: str, body: Callable[[], tuple[list[str], dict, Callable[[dict], str]]], fmt: str,
        timing: bool) -> None:
    start = time.perf_counter()
    try:
        inputs, results, text = body()
    except Failure as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except (ResourceError, BoundExceeded) as exc:
        click.echo(f"resource limit: {exc}", err=True)
        sys.exit(EXIT_RESOURCE)
    except (IdentityError, ArithmeticError) as exc:
        click.echo(f"internal identity failure: {exc}", err=True)
        sys.exit(EXIT_IDENTITY)
    except ParseError as exc:
        click.echo(f"parse error at byte {exc.offset}: {exc}", err=True)
        sys.exit(EXIT_USER)
    except (PolyError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USER)
    emit(command, [command] + inputs, results, fmt, text, time.perf_counter() - start if timing else None)


def common(f):
    f = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
                     show_default=True, help="Report format.")(f)
    f = click.option("--timing", is_flag=True, help="Include wall-clock timing in JSON output.")(f)
    return f


@click.group()
@click.version_option(__version__, prog_name="sdslink")
def main() -> None:
    """Splitting lemma, cA_n classification, sextic double solid families and toric links."""


# split


@main.command("split")
@click.argument("source", required=False)
@click.option("--var", "vars_", multiple=True, required=True,
              help="Variable to split off; repeat to split iteratively.")
@click.option("--degree", "N", type=int, default=20, show_default=True, help="Truncation degree N.")
@click.option("--emit", "what", type=click.Choice(["h", "g", "p", "v", "all"]), default="h", show_default=True)
@click.option("--chart", multiple=True, help="Set this variable to 1 before splitting (affine chart).")
@click.option("--vars", "order", help="Variable order, e.g. 'x y z t' (default: order of appearance).")
@common
def cmd_split(source, vars_, N, what, chart, order, fmt, timing):
    """Split the given variables off the polynomial in SOURCE (file or '-' for stdin)."""

    def body():
        text = strip_comments(read_input(source))
        table = infer_table(text, order)
        missing = [v for v in vars_ if v not in table]
        if missing:
            table = table.extend(missing)
        f = parse(text, table)
        for c in chart:
            if c not in table:
                raise Failure(EXIT_USER, f"chart variable {c} does not occur")
            f = f.evaluate({c: 1})
        results: dict = {"vars": list(vars_), "degree": N}
        if len(vars_) > 1:
            if what != "h":
                raise Failure(EXIT_USER, "iterated splitting only emits the residual h")
            h = iterated_split(f, vars_, N)
            results["h"] = h.render()
        else:
            s = split(f, vars_[0], N)
            keys = ["h", "g", "p", "v"] if what == "all" else [what]
            for k in keys:
                results[k] = getattr(s, k).render()
            results["verified"] = True

        def show(r):
            lines = [f"{k} = {r[k]}" for k in ("h", "g", "p", "v") if k in r]
            if r.get("verified"):
                lines.append("verify_split: true")
            return "\n".join(lines)

        return [text, repr(vars_), str(N), what, repr(chart)], results, show

    run("split", body, fmt, timing)


# classify


def parse_point(text: str | None, table: VarTable) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise Failure(EXIT_USER, f"point entries look like 'x=1', got {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        if k not in table:
            raise Failure(EXIT_USER, f"unknown coordinate {k}")
        out[k] = parse(v, VarTable.of(())).constant_term()
    return out


@main.command("classify")
@click.argument("source", required=False)
@click.option("--point", help="Base point, e.g. 'x=0,y=1'; unlisted coordinates are 0.")
@click.option("--degree-bound", "N", type=int, default=20, show_default=True)
@click.option("--vars", "order", help="Coordinate order (default: order of appearance).")
@common
def cmd_classify(source, point, N, order, fmt, timing):
    """Classify the germ of V(f) at a point as cA_n."""

    def body():
        text = strip_comments(read_input(source))
        table = infer_table(text, order)
        f = parse(text, table)
        rep = classify_cAn(f, parse_point(point, table), N)
        return [text, str(point), str(N)], rep.as_dict(), lambda r: (
            f"{r['label']} (quadratic rank {r['quad_rank']}"
            f"{', certified' if r['certified'] else ', not certified'})"
            + (f"\nresidual h = {r['residual_h']}" if r["residual_h"] is not None else "")
        )

    run("classify", body, fmt, timing)


# family


def _family_id(text: str) -> FamilyId:
    try:
        return FamilyId.parse(text)
    except (ValueError, FamilyError) as exc:
        raise Failure(EXIT_USER, f"bad family {text!r}: {exc}") from None


def _coefficients(path: str | None) -> SDSCoefficients:
    return SDSCoefficients.from_text(read_input(path)) if path else SDSCoefficients()


@main.group("family")
def cmd_family() -> None:
    """Sextic double solid families with a cA_n point."""


@cmd_family.command("construct")
@click.option("--family", "family", required=True, help="n or n.sub, e.g. 5 or 7.2")
@click.option("--coefficients", "coeffs", help="Coefficient file ('name = polynomial' lines).")
@common
def cmd_construct(family, coeffs, fmt, timing):
    """Print the defining polynomial after conditions 2..n."""

    def body():
        fid = _family_id(family)
        c = _coefficients(coeffs)
        f = run_chain(generic_f(), apply_conditions(fid))
        if c.values:
            f = f.substitute({k: v for k, v in c.values.items() if k in f.table})
        res = {"family": str(fid), "f": f.render(), "conditions": [k for k, _ in apply_conditions(fid)]}
        return [str(fid), repr(sorted((k, v.render()) for k, v in c.values.items()))], res, lambda r: f"f = {r['f']}"

    run("family construct", body, fmt, timing)


@cmd_family.command("check")
@click.option("--family", "family", required=True)
@click.option("--coefficients", "coeffs", required=True)
@click.option("--no-residual", is_flag=True, help="Skip the residual h_{n+1} computation.")
@common
def cmd_check(family, coeffs, no_residual, fmt, timing):
    """Check concrete coefficients against conditions 2..n."""

    def body():
        fid = _family_id(family)
        c = _coefficients(coeffs)
        rep = check_membership(c, fid, residual=not no_residual)

        def show(r):
            lines = [f"{k}: {'pass' if v['passed'] else 'FAIL'}" + ("" if v["passed"] else f" (witness {v['witness']})")
                     for k, v in r["conditions"].items()]
            if r["residual_next"] is not None:
                lines.append(f"h_(n+1) = {r['residual_next']}")
            lines.append(r["verdict"])
            return "\n".join(lines)

        return [str(fid), read_input(coeffs)], rep.as_dict(), show

    run("family check", body, fmt, timing)


@cmd_family.command("dims")
@click.option("--family", "family", help="A single family; default all eleven.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker threads.")
@common
def cmd_dims(family, jobs, fmt, timing):
    """Parameter-space dimensions after conditions 2..n."""

    def body():
        fids = [_family_id(family)] if family else all_families()
        with ThreadPoolExecutor(max_workers=max(1, jobs)) as ex:
            dims = list(ex.map(param_dim, fids))
        res = {"dims": {str(f): d for f, d in zip(fids, dims)}, "order": [str(f) for f in fids]}
        return [repr([str(f) for f in fids])], res, lambda r: "\n".join(
            f"cA_{k}: {r['dims'][k]}" for k in r["order"])

    run("family dims", body, fmt, timing)


@cmd_family.command("generality")
@click.option("--family", "family", required=True, type=click.Choice(GENERALITY_FAMILIES + tuple(
    g.replace(".", "-") for g in GENERALITY_FAMILIES)))
@click.option("--coefficients", "coeffs", required=True)
@common
def cmd_generality(family, coeffs, fmt, timing):
    """Necessary generality conditions for the link of a family."""

    def body():
        v = check_generality(family, _coefficients(coeffs))

        def show(r):
            lines = [f"{k}: {'pass' if c['passed'] else 'FAIL'} ({c['witness']})" for k, c in r["checks"].items()]
            lines.append(("general" if r["passed"] else "not general") + f" ({r['note']})")
            return "\n".join(lines)

        return [family, read_input(coeffs)], v.as_dict(), show

    run("family generality", body, fmt, timing)


# toric links


def _walk_text(r: dict) -> str:
    out = []
    for i, s in enumerate(r["steps"]):
        sig = ", ".join(f"{k}:{v}" for k, v in s["signature"].items())
        out.append(f"[{i}] {s['kind']} at ray ({', '.join(s['ray'])})")
        out.append(f"    signature ({sig})")
        out.append(f"    map [{', '.join(s['monomial_map']['generators'])}]")
        out.append(f"    target {s['target']}")
        if s["note"]:
            out.append(f"    {s['note']}")
    if "strict_transform" in r:
        st = r["strict_transform"]
        for g, k in zip(st["generators"], st["orders"]):
            out.append(f"strict transform: divided by u^{k}: {g}")
    if "flop_wall" in r:
        fw = r["flop_wall"]
        out.append(f"wall restriction: V({', '.join(fw['equations'])}); points: {fw['points']} ({fw['detail']})")
    if "kawakita" in r:
        k = r["kawakita"]
        out.append(f"Kawakita {tuple(k['blowup'])}: symbolic weight {k['symbolic_weight']}, "
                   f"{k['concrete']}, germ {k['germ']}, {'pass' if k['passed'] else 'FAIL'}")
    return "\n".join(out)


@main.command("toric-link")
@click.argument("source", required=False)
@click.option("--builtin", type=click.Choice(sorted(LINKS)), help="Replay a stored link instead of a file.")
@click.option("--bound", type=int, default=24, show_default=True, help="Exponent bound for ample models.")
@common
def cmd_toric_link(source, builtin, bound, fmt, timing):
    """Walk the 2-ray game of a rank-two toric variety (link-definition file or --builtin)."""

    def body():
        if builtin:
            link = get_link(builtin)
            steps = replay_walk(link, bound)
            res: dict = {"steps": [s.as_dict() for s in steps],
                         "strict_transform": replay_strict_transform(link).as_dict(),
                         "expected_orders": list(link.orders)}
            if link.flop_wall:
                res["flop_wall"] = replay_flop_wall(link, concrete_values(link)).as_dict()
            res["kawakita"] = replay_kawakita(link).as_dict()
            return [builtin], res, _walk_text
        text = read_input(source)
        T, meta = parse_link_file(text)
        res = {"matrix": [[str(x) for x in row] for row in T.action], "wall": T.wall}
        gens: list[Poly] = []
        if meta["gen"]:
            extra = [n for line in meta["table"] for n in line.split()]
            weights = {}
            for line in meta["weight"]:
                name, val = (s.strip() for s in line.split("=", 1))
                weights[name] = int(val)
            names = list(T.names) + [n for n in extra if n not in T.names]
            table = VarTable.of(names)
            gens = [parse(g, table) for g in meta["gen"]]
            exc = meta["exceptional"][0] if meta["exceptional"] else T.names[0]
            st = strict_transform(T, gens, exc, None, weights)
            res["strict_transform"] = st.as_dict()
            degs = [bidegree(T, g) for g in st.generators]
            anti = None
            if all(d is not None for d in degs):
                anti = variety_anticanonical(T, degs)  # type: ignore[arg-type]
            steps = walk_link(T, anti, bound)
        else:
            steps = walk_link(T, None, bound)
        res["steps"] = [s.as_dict() for s in steps]
        return [text, str(bound)], res, _walk_text

    run("toric-link", body, fmt, timing)


if __name__ == "__main__":  # pragma: no cover
    main()
