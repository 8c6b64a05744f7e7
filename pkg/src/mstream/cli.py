"""Command-line entry point: ``mstream run|opt|verify-kernel|probe-conjecture|bench``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .errors import MStreamError, ParamError
from .harness import ALGORITHMS, open_instance, run_bench, run_cell, stream_params
from .instance import resolve_order
from .kernel import brute_force_kernel, extract_solution, ordered_matroids, verify_kernel
from .oracles import OracleBudget, brute_force_intersection_opt, conjecture_probe, no_kernel_witness, random_orders
from .report import canonical_json, emit_report, rational
from .streaming import StreamParams, run_streaming_k


def _write(data: bytes, out):
    if out in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def _order(inst, mode):
    try:
        return resolve_order(inst, mode)
    except ValueError as exc:
        raise ParamError(str(exc)) from None


def cmd_run(args):
    inst = open_instance(args.instance)
    report = run_cell(
        inst, args.algo, args.order, args.epsilon, args.alpha, args.y,
        args.q, args.delta, args.seed, args.opt,
    )
    _write(emit_report(report, include_timing=args.timing), args.out)
    return 0


def cmd_opt(args):
    inst = open_instance(args.instance)
    best, value = brute_force_intersection_opt(inst, OracleBudget.from_env())
    pos = {e: i for i, e in enumerate(inst.ids())}
    doc = {
        "fixture": inst.name,
        "opt_set": sorted(best, key=pos.get),
        "opt_weight": rational(value),
        "opt_weight_approx": float(value),
    }
    _write(canonical_json(doc), args.out)
    return 0


def cmd_verify_kernel(args):
    inst = open_instance(args.instance)
    if inst.k != 2:
        raise ParamError("verify-kernel needs exactly two matroids")
    order = _order(inst, args.order)
    rep = run_streaming_k(inst, order, StreamParams(Fraction(1)))
    state = rep.final_state
    kernel = extract_solution(state)
    om1, om2 = ordered_matroids(state)
    ground = state.alive_ids()
    ok = verify_kernel(om1, om2, ground, kernel)
    doc = {
        "fixture": inst.name,
        "order": order,
        "stack": ground,
        "kernel": sorted(kernel, key=ground.index),
        "kernel_weight": rational(sum((inst.weight(e) for e in kernel), Fraction(0))),
        "g_alive": rational(rep.g_alive),
        "verified": bool(ok),
    }
    if args.enumerate:
        OracleBudget.from_env().require(len(ground), "stack")
        kernels = brute_force_kernel(om1, om2, ground, max_elements=OracleBudget.from_env().max_elements)
        doc["all_kernels"] = sorted(sorted(k, key=ground.index) for k in kernels)
        doc["in_enumeration"] = frozenset(kernel) in {frozenset(k) for k in kernels}
    _write(canonical_json(doc), args.out)
    return 0 if ok else 3


def cmd_probe(args):
    inst = open_instance(args.instance)
    budget = OracleBudget.from_env()
    params = StreamParams(Fraction(1))
    if args.alpha is not None or args.epsilon is not None:
        params = stream_params(inst, args.epsilon, args.alpha, args.y)
    orders = [inst.default_order()] + list(random_orders(inst, max(0, args.orders - 1), args.seed))
    probe = conjecture_probe(inst, orders, params, budget)
    doc = {
        "fixture": inst.name,
        "k": probe.k,
        "opt_weight": rational(probe.opt_weight),
        "orders_tried": probe.orders_tried,
        "worst_ratio": rational(probe.worst_ratio),
        "worst_order": probe.worst_order,
        "worst_best_subset": sorted(probe.worst_best_subset),
        "flagged": probe.flagged,
        "counterexample_order": probe.counterexample_order,
    }
    rep = run_streaming_k(inst, inst.default_order(), params)
    doc["no_kernel_witness_file_order"] = no_kernel_witness(inst, rep.final_state, budget)
    _write(canonical_json(doc), args.out)
    return 0


def cmd_bench(args):
    table = run_bench(args.manifest, args.jobs)
    _write(table.encode("utf-8"), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mstream", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_arg(p):
        p.add_argument("--instance", required=True,
                       help="instance JSON path, or fixture:<name> for a bundled one")
        p.add_argument("--out", default="-", help="output file (default stdout)")

    p = sub.add_parser("run", help="run one algorithm and emit a JSON report")
    instance_arg(p)
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--epsilon", help="rational; alone it selects alpha = 1+eps, y = min rank / eps^2")
    p.add_argument("--alpha", help="rational selection threshold multiplier")
    p.add_argument("--y", help="rational deletion parameter or 'inf'")
    p.add_argument("--q", help="keep probability for the submodular coin")
    p.add_argument("--delta", help="submodular schedule: y = min rank / delta^2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", default="file", help="file | reverse | shuffle:<seed>")
    p.add_argument("--opt", action="store_true", help="also compute the exact optimum")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("opt", help="exact optimum by exhaustive search")
    instance_arg(p)
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("verify-kernel", help="extract and verify the kernel of an exact run")
    instance_arg(p)
    p.add_argument("--order", default="file")
    p.add_argument("--enumerate", action="store_true", help="list every kernel by brute force")
    p.set_defaults(func=cmd_verify_kernel)

    p = sub.add_parser("probe-conjecture", help="search stream orders for a bad k-matroid stack")
    instance_arg(p)
    p.add_argument("--orders", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon")
    p.add_argument("--alpha")
    p.add_argument("--y")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("bench", help="run a manifest of cells and emit a CSV table")
    p.add_argument("--manifest", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MStreamError as exc:
        print(f"mstream: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
