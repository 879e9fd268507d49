"""Command-line front end.

Exit codes: 0 success, 1 domain error (invalid network, unbalanced partition
where one is required, failed fibration check, ...), 2 usage error or
unreadable input file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable, Sequence


from . import admissible, fibration, model, partition, sim, synchrony
from .augment import augment as augment_network

FORMATS = ("text", "csv", "json-lines")


class UsageError(Exception):
    pass


class Output:
    """Records plus a text rendering; emitted according to ``--format``."""

    def __init__(self, records: list[dict], text: list[str]):
        self.records = records
        self.text = text

    def emit(self, fmt: str, out) -> None:
        if fmt == "text":
            for line in self.text:
                print(line, file=out)
        elif fmt == "json-lines":
            for r in self.records:
                print(json.dumps(r, sort_keys=False), file=out)
        else:
            if not self.records:
                return
            keys = list(self.records[0])
            w = csv.writer(out, lineterminator="\n")
            w.writerow(keys)
            for r in self.records:
                w.writerow([_csv_cell(r.get(k)) for k in keys])


def _csv_cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (list, tuple)):
        return " ".join(map(str, x))
    return "" if x is None else x


def _load(path: str, check: bool = True) -> model.Hypernetwork:
    return model.load(path, check)


def _partition(net, spec: str) -> partition.Partition:
    p = partition.parse_partition(spec, net)
    p.check_refines(net)
    return p


# -- subcommands ---------------------------------------------------------------------


def cmd_validate(a) -> tuple[Output, int]:
    net = _load(a.file, check=False)
    problems = model.validate(net)
    if not problems:
        return Output([{"valid": True, "order": net.order}], [f"valid: true (order {net.order})"]), 0
    recs = [{"valid": False, "condition": p.condition, "ids": list(p.ids), "message": p.message} for p in problems]
    return Output(recs, ["valid: false"] + [str(p) for p in problems]), 1


def cmd_balanced(a):
    net = _load(a.file)
    p = _partition(net, a.partition)
    res = partition.is_balanced(net, p)
    rec = {"partition": str(p), "balanced": res.balanced}
    text = [f"balanced: {str(res.balanced).lower()}"]
    if not res:
        mm = res.mismatch
        rec.update(vertices=list(mm.vertices), etype=mm.etype,
                   signature=list(mm.signature) if mm.signature else None, counts=list(mm.counts))
        if mm.reason == "census":
            text.append(f"mismatch: {mm.vertices[0]} has {mm.counts[0]} and {mm.vertices[1]} has {mm.counts[1]} "
                        f"in-edges of type {mm.etype} with signature {mm.signature}")
        else:
            text.append(f"mismatch: {mm.vertices[0]} and {mm.vertices[1]} have different vertex types")
    return Output([rec], text), 0


def cmd_partitions(a):
    net = _load(a.file)
    parts = partition.enumerate_balanced(net, a.max_vertices)
    recs = [{"classes": len(p.classes), "partition": str(p)} for p in parts]
    return Output(recs, [str(p) for p in parts]), 0


def cmd_quotient(a):
    net = _load(a.file)
    p = _partition(net, a.partition)
    res = fibration.quotient(net, p, a.name)
    text = model.serialize(res.quotient)
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if a.map:
        with open(a.map, "w", encoding="utf-8") as fh:
            fh.write(fibration.format_map(res.phi))
    recs = [{"vertex": v, "class": list(p.class_of(v))} for v in res.representatives]
    lines = [] if a.output else text.rstrip("\n").splitlines()
    if a.output:
        lines = [f"wrote {a.output}: {len(res.quotient.vertices)} vertices, {len(res.quotient.hyperedges)} hyperedges"]
    return Output(recs, lines), 0


def cmd_fibration(a):
    net, target = _load(a.source), _load(a.target)
    with open(a.map, encoding="utf-8") as fh:
        phi = fibration.parse_map(fh.read())
    rep = fibration.check_fibration(net, target, phi)
    recs = [{"condition": c.condition, "ok": c.ok, "offending": list(c.offending)} for c in rep.conditions]
    verdict = f"fibration: {str(bool(rep)).lower()}"
    if rep:
        verdict += f" (surjective: {str(phi.is_surjective(target)).lower()})"
    return Output(recs, rep.lines() + [verdict]), 0 if rep else 1


def cmd_augment(a):
    core = _load(a.file)
    nodes = [n for n in a.nodes.split(",") if n]
    net = augment_network(core, nodes, w_type=a.w_type, hyper_etype=a.hyper_type, loop_etype=a.loop_type)
    if a.name:
        net = net.with_name(a.name)
    text = model.serialize(net)
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        lines = [f"wrote {a.output}: {len(net.vertices)} vertices, {len(net.hyperedges)} hyperedges"]
    else:
        lines = text.rstrip("\n").splitlines()
    return Output([{"vertices": len(net.vertices), "hyperedges": len(net.hyperedges), "order": net.order}], lines), 0


def _witness_record(w: synchrony.Witness) -> dict:
    return {"etype": w.etype, "sigma": list(w.sigma.as_one_based()), "vertices": list(w.vertices),
            "point": {str(c): z for c, z in w.colour_values.items()}, "values": [str(x) for x in w.values],
            "degree": w.degree, "polynomial": w.spec}


def _witness_lines(w: synchrony.Witness, net) -> list[str]:
    point = " ".join(f"{v}={x}" for v, x in zip(_state_labels(net), w.state))
    return [f"witness edge type: {w.etype}",
            f"sigma: {w.sigma}",
            f"degree: {w.degree}",
            f"response ({net.vtype(w.vertices[0])}, component 0): {w.spec}",
            f"point: {point}",
            f"f_{w.vertices[0]} = {w.values[0]}, f_{w.vertices[1]} = {w.values[1]}"]


def _state_labels(net) -> list[str]:
    out = []
    for v in net.vertex_ids:
        d = net.dim(v)
        out.extend([v] if d == 1 else [f"{v}[{c}]" for c in range(d)])
    return out


def cmd_witness(a):
    net = _load(a.file)
    p = _partition(net, a.partition)
    w = synchrony.find_breaking_witness(net, p)
    if w is None:
        return Output([{"partition": str(p), "witness": None}], ["witness: none (partition is balanced)"]), 0
    return Output([{"partition": str(p), **_witness_record(w)}], _witness_lines(w, net)), 0


def cmd_verdict(a):
    net = _load(a.file)
    p = _partition(net, a.partition)
    v = synchrony.robust_verdict(net, p, seed=a.seed, degree_cap=a.degree_cap, probes=a.probes)
    rec = {"partition": str(p), "balanced": v.balanced, "invariant_under_low_degree": v.invariant_under_low_degree,
           "probe_degree": v.probe_degree, "probes": v.probes, "degree_bound": v.degree_bound,
           "witness": _witness_record(v.witness) if v.witness else None}
    return Output([rec], v.lines()), 0


def _sim_config(a) -> sim.SimConfig:
    kw = dict(dt=a.dt, t_end=a.t_end, lambda_min=a.lambda_min, lambda_max=a.lambda_max,
              lambda_steps=a.lambda_steps, stride=a.stride, method=a.method, steady_tol=a.steady_tol)
    if a.x0 is not None:
        kw["initial"] = tuple(float(x) for x in a.x0.split(","))
    return sim.SimConfig(**kw)


def _system(a, net) -> admissible.AdmissibleSystem:
    return admissible.AdmissibleSystem(net, admissible.resolve_library(a.responses, net, a.seed))


def cmd_simulate(a):
    net = _load(a.file)
    system = _system(a, net)
    cfg = _sim_config(a)
    trace = sim.integrate(system, a.lam, cfg)
    cols = sim.state_columns(system)
    recs = [{"t": float(t), **{c: float(x) for c, x in zip(cols, s)}} for t, s in zip(trace.times, trace.states)]
    return _csv_output(recs, a), 0


def cmd_bifurcate(a):
    net = _load(a.file)
    system = _system(a, net)
    d = sim.sweep(system, _sim_config(a), jobs=a.jobs)
    buf = io.StringIO()
    sim.write_csv(d, buf)
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    recs = [{"lambda": float(lam), **{c: float(x) for c, x in zip(d.columns, s)}, "residual": float(r),
             "converged": bool(ok)} for lam, s, r, ok in zip(d.lambdas, d.states, d.residual, d.converged)]
    if a.output:
        n_conv = int(d.converged.sum())
        return Output(recs if a.format != "text" else [],
                      [f"wrote {a.output}: {len(d)} rows, {n_conv} converged"]), 0
    return _csv_output(recs, a), 0


def _csv_output(recs, a) -> Output:
    out = Output(recs, [])
    if a.format == "text":
        buf = io.StringIO()
        out.emit("csv", buf)
        out.text = buf.getvalue().rstrip("\n").splitlines()
    return out


def cmd_slope(a):
    with open(a.csv, encoding="utf-8") as fh:
        d = sim.read_csv(fh)
    pair = tuple(a.pair.split(","))
    if len(pair) != 2 or any(c not in d.columns for c in pair):
        raise UsageError(f"--pair must name two columns of {list(d.columns)}")
    rng = None
    if a.lambda_lo is not None or a.lambda_hi is not None:
        lo, hi = sim.default_fit_range(d.lambdas)
        rng = (a.lambda_lo if a.lambda_lo is not None else lo, a.lambda_hi if a.lambda_hi is not None else hi)
    fit = sim.diagram_slope(d, pair, rng)
    rec = {"slope": fit.slope, "intercept": fit.intercept, "r2": fit.r2, "n": fit.n,
           "lambda_lo": fit.lam_range[0], "lambda_hi": fit.lam_range[1]}
    text = [f"slope: {fit.slope:.6f}", f"intercept: {fit.intercept:.6f}", f"r2: {fit.r2:.6f}",
            f"points: {fit.n}", f"lambda range: [{fit.lam_range[0]:.6g}, {fit.lam_range[1]:.6g}]"]
    return Output([rec], text), 0


# -- parser --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hypernet", description="Structure and dynamics of typed hypernetworks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="output format (default text)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn: Callable, help_: str):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("validate", cmd_validate, "check the typing axioms of a .hn file")
    p.add_argument("file")

    p = add("balanced", cmd_balanced, "is a partition balanced")
    p.add_argument("file")
    p.add_argument("--partition", required=True, help='classes separated by "|", e.g. "v0 v1 | w0 w1"')

    p = add("partitions", cmd_partitions, "list every balanced partition")
    p.add_argument("file")
    p.add_argument("--max-vertices", type=int, default=12)

    p = add("quotient", cmd_quotient, "quotient by a balanced partition")
    p.add_argument("file")
    p.add_argument("--partition", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--map", help="also write the quotient map to this file")
    p.add_argument("--name")

    p = add("fibration", cmd_fibration, "check a hypergraph fibration given by a map file")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--map", required=True)

    p = add("augment", cmd_augment, "add two parity nodes to a core")
    p.add_argument("file")
    p.add_argument("--nodes", required=True, help="comma-separated core nodes v0,...,vk")
    p.add_argument("-o", "--output")
    p.add_argument("--name")
    p.add_argument("--w-type", default="w")
    p.add_argument("--hyper-type", default="hyp")
    p.add_argument("--loop-type", default="loop_w")

    p = add("verdict", cmd_verdict, "balancedness plus random low-degree invariance probes")
    p.add_argument("file")
    p.add_argument("--partition", required=True)
    p.add_argument("--degree-cap", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--probes", type=int, default=25)

    p = add("witness", cmd_witness, "admissible polynomial breaking a synchrony subspace")
    p.add_argument("file")
    p.add_argument("--partition", required=True)

    for name, fn, help_ in (("simulate", cmd_simulate, "integrate one trajectory"),
                            ("bifurcate", cmd_bifurcate, "sweep lambda and record final states")):
        p = add(name, fn, help_)
        p.add_argument("file")
        p.add_argument("--responses", default="example58", help="example58, random:<degree> or a response file")
        p.add_argument("--dt", type=float, default=0.1)
        p.add_argument("--t-end", type=float, default=2000.0)
        p.add_argument("--lambda-min", type=float, default=-0.03)
        p.add_argument("--lambda-max", type=float, default=0.03)
        p.add_argument("--lambda-steps", type=int, default=600)
        p.add_argument("--x0", help="comma-separated initial state")
        p.add_argument("--stride", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--method", choices=("euler", "rk4"), default="euler")
        p.add_argument("--steady-tol", type=float, default=1e-8)
        if name == "simulate":
            p.add_argument("--lambda", dest="lam", type=float, default=0.0)
        else:
            p.add_argument("-o", "--output")
            p.add_argument("--jobs", type=int, default=1)

    p = add("slope", cmd_slope, "log-log slope of |a - b| against lambda from a bifurcation CSV")
    p.add_argument("csv")
    p.add_argument("--pair", default="w0,w1")
    p.add_argument("--lambda-lo", type=float)
    p.add_argument("--lambda-hi", type=float)
    return ap


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        result, code = args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: cannot read {exc.filename}: {exc.strerror}", file=err)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    result.emit(args.format, out)
    return code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
