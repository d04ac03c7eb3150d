"""Command-line entry point.

Subcommands: ``analyze`` a strategy file, ``play`` it against an answers
file, ``verify`` a claim campaign, ``order`` two tree files, and ``g2sim``
a backtracking-game transcript.  Exit codes: 0 success / zero
counterexamples, 1 counterexamples found, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from pebblegames.matching import GameSize, LogPower, Query
from pebblegames import simple_game as sg
from pebblegames import php_tree as phpmod
from pebblegames import trees as treemod
from pebblegames import verify as ver
from pebblegames import g2 as g2mod


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pebblegames",
        description="Engines and verifiers for Prover-Delayer pebble games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="print graph, loops, php-tree and win certificate")
    p_an.add_argument("strategy", type=Path)
    p_an.add_argument("--s-max", type=int, default=64)

    p_pl = sub.add_parser("play", help="replay a strategy against an answers file")
    p_pl.add_argument("strategy", type=Path)
    p_pl.add_argument("answers", type=Path)

    p_ve = sub.add_parser("verify", help="run a verification campaign")
    p_ve.add_argument("claim")
    p_ve.add_argument("--shards", type=int, default=1)
    p_ve.add_argument("--threads", type=int, default=1)
    p_ve.add_argument("--s-max", type=int, default=64)
    p_ve.add_argument("--seed", type=int, default=20240901)
    p_ve.add_argument("--playouts", type=int, default=10_000)
    p_ve.add_argument("--samples", type=int, default=0)
    p_ve.add_argument("--fast-path", choices=["on", "off"], default="on")
    p_ve.add_argument("--symmetry", choices=["on", "off"], default="off")
    p_ve.add_argument("--checkpoint", type=Path, default=None)
    p_ve.add_argument("--ce-dir", type=Path, default=None)
    p_ve.add_argument("--no-timing", action="store_true", help="print seconds=0.000 for reproducible output")
    p_ve.add_argument("--progress", action="store_true")

    p_or = sub.add_parser("order", help="compare two tree files under the tree order")
    p_or.add_argument("tree_a", type=Path)
    p_or.add_argument("tree_b", type=Path)

    p_g2 = sub.add_parser("g2sim", help="simulate the backtracking game")
    p_g2.add_argument("--n", type=int, required=True)
    p_g2.add_argument("--C", type=int, default=2)
    p_g2.add_argument("--strategy", choices=["root-ramify"], default="root-ramify")
    p_g2.add_argument("--answers", type=Path, default=None,
                      help="hole answers consumed left to right; canonical otherwise")
    return parser


def _load_strategy(path: Path) -> sg.SimpleStrategy:
    return sg.parse_strategy(path.read_text())


def _cmd_analyze(args: argparse.Namespace) -> int:
    strat = _load_strategy(args.strategy)
    graph = sg.build_graph(strat)
    print(f"strategy: n={strat.size.n} s={strat.s} init={strat.init}")
    print(f"graph: {len(list(graph.nodes))} nodes, {len(graph.edges())} edges")
    for line in graph.adjacency_lines():
        print("  " + line)
    loops = sorted(sg.find_loops(strat))
    print("loops: " + (" ".join(f"({e.tail},{e.label})" for e in loops) if loops else "none"))
    if strat.size.pigeon_count is None:
        tree = phpmod.build_php_tree(strat)
        loose = sorted(phpmod.find_loose_pairs(tree, strat.size))
        print(
            "loose pairs: "
            + (" ".join(f"({p},{h})" for p, h in loose) if loose else "none")
        )
        print(
            f"php-tree: {len(tree)} nodes, depth {tree.depth}, "
            f"valid={'yes' if phpmod.validate_php_tree(tree) else 'no'}, "
            f"complete={'yes' if phpmod.is_complete(tree) else 'no'}, "
            f"symmetric={'yes' if phpmod.is_symmetric(tree) else 'no'}"
        )
    else:
        print("php-tree: not defined for boards with extra pigeons")
    cert = sg.delayer_wins_lengths(strat, s_max=args.s_max)
    print("delayer wins: " + cert.summary())
    return 0


def _cmd_play(args: argparse.Namespace) -> int:
    strat = _load_strategy(args.strategy)
    play = sg.parse_play(args.answers.read_text())
    result = sg.play_simplified(strat, play)
    question = strat.init
    for i, rec in enumerate(result.records, start=1):
        print(f"round {i}: question {rec.pigeon} answer {rec.hole}")
        question = strat.next_question(rec)
    tag = {
        sg.PlayOutcome.PROVER_WINS_MIDGAME: f"prover wins midgame at round {result.step}",
        sg.PlayOutcome.PROVER_WINS_FINAL: "prover wins on the final comparison",
        sg.PlayOutcome.DELAYER_WINS: "delayer wins",
        sg.PlayOutcome.INCOMPLETE: "incomplete play",
    }[result.outcome]
    print("outcome: " + tag)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    claim = args.claim
    fast = args.fast_path == "on"
    if claim in ("theorem-main-n1", "theorem-main-n2", "theorem-main-n3", "theorem-main-n4"):
        n = int(claim[-1])
        report = ver.verify_theorem_main(
            n=n,
            s_max=args.s_max,
            shards=args.shards,
            threads=args.threads,
            fast_path=fast,
            checkpoint=args.checkpoint,
            ce_dir=args.ce_dir,
            progress=args.progress,
            sample=(args.samples or 100_000) if n > 3 else None,
            seed=args.seed,
        )
    elif claim == "loop-bound-n3":
        report = ver.verify_loop_bound(3, progress=args.progress)
    elif claim == "small-n":
        r1 = ver.verify_small_n(1)
        r2 = ver.verify_small_n(2)
        report = ver.CampaignReport(
            "small-n",
            r1.space + r2.space,
            r1.counterexamples + r2.counterexamples,
            r1.seconds + r2.seconds,
        )
    elif claim.startswith("subset-n"):
        report = ver.verify_subset_prop(int(claim[len("subset-n"):]))
    elif claim == "order-axioms":
        r1 = ver.verify_order_axioms(2, 2)
        r2 = ver.verify_order_axioms(3, 2, seed=args.seed)
        report = ver.CampaignReport(
            "order-axioms",
            r1.space + r2.space,
            r1.counterexamples + r2.counterexamples,
            r1.seconds + r2.seconds,
        )
    elif claim == "g2-properties":
        report = ver.verify_g2_properties(playouts=args.playouts, seed=args.seed)
    elif claim == "g2prime":
        report = ver.verify_g2prime(plays=args.playouts if args.playouts != 10_000 else 1000, seed=args.seed)
    elif claim == "figures":
        report = ver.verify_figures()
    elif claim == "php-trees":
        build = args.samples or 10_000
        report = ver.verify_php_trees(build_samples=build, seed=args.seed)
    elif claim == "oracle-equivalence":
        n3 = args.samples or 10_000
        report = ver.verify_oracle_equivalence(n3_samples=n3, n4_samples=max(1, n3 // 10), seed=args.seed)
    else:
        print(f"unknown claim {claim!r}", file=sys.stderr)
        return 2
    print(report.line(timing=not args.no_timing))
    for ce in report.counterexamples[:16]:
        print("counterexample:\n" + ce if "\n" in ce else "counterexample: " + ce)
    return 0 if report.ok else 1


def _cmd_order(args: argparse.Namespace) -> int:
    ta = treemod.parse_tree(args.tree_a.read_text().splitlines())
    tb = treemod.parse_tree(args.tree_b.read_text().splitlines())
    cmp = treemod.tree_compare(ta, tb)
    name = {
        treemod.Ordering.LESS: "Less",
        treemod.Ordering.EQUAL: "Equal",
        treemod.Ordering.GREATER: "Greater",
    }[cmp]
    print(name)
    b = max(
        (max((max(v) for v in t if v), default=0) for t in (ta, tb)),
        default=0,
    ) + 2
    h = max(ta.height, tb.height)
    ea = treemod.ordinal_embed(ta, b, h)
    eb = treemod.ordinal_embed(tb, b, h)
    print(f"embed a: {ea}")
    print(f"embed b: {eb}")
    return 0


def _cmd_g2sim(args: argparse.Namespace) -> int:
    cfg = LogPower(args.n, args.C)
    tree, strategy = g2mod.prover_root_ramify(args.n, cfg)
    oracle = treemod.TreeOracle.explicit(tree)
    answers: list[int] = []
    if args.answers:
        answers = [int(x) for x in args.answers.read_text().split() if x.strip()]
    size = GameSize(cfg.n)
    pointer = {"i": 0}

    def delayer(pos: g2mod.G2Position, q: Query):
        from pebblegames.matching import minimal_covers

        options = sorted(minimal_covers(q, None, size), key=lambda m: m.entries)
        if pointer["i"] < len(answers):
            pick = answers[pointer["i"]] % len(options)
            pointer["i"] += 1
        else:
            pick = 0
        return options[pick]

    result = g2mod.g2_play(cfg, oracle, strategy, delayer, step_cap=10_000)
    sys.stdout.write(result.transcript.format())
    print(f"winner: {result.winner} in {result.steps} steps")
    return 0


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "play":
            return _cmd_play(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "order":
            return _cmd_order(args)
        if args.command == "g2sim":
            return _cmd_g2sim(args)
    except (sg.StrategyParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
