"""Command-line interface: ``votexp <command> ...``.

Exit codes: 0 success, 1 internal error, 2 bad input or failed
precondition, 3 a size guard was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

from . import cultures, mapelect, metrics
from .core import PartialRankMatrix, ProfileError, read_profile, write_profile
from .enumerate import SMALLEST_METHODS, enumerate_xps, find_smallest_cxp, find_smallest_iaxp
from .oracle import OracleLimitError, brute_xps
from .scoring import RuleError, ScoringVector, parse_rule, winners
from .xplain import PreconditionError, find_cxp, find_iaxp

log = logging.getLogger("votexp")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3

ANALYSIS_COLUMNS = (
    "profile_id", "culture", "n", "m", "agreement", "margin_of_victory", "siaxp_size", "siaxp_norm",
)


class InputError(ValueError):
    """Bad command-line input (reported with exit code 2)."""


def pick_winner(full: PartialRankMatrix, rule: ScoringVector, name: str | None) -> int:
    """The named candidate, or the co-winner whose name sorts first."""
    if name is None:
        return min(winners(full, rule), key=lambda c: full.names[c])
    if name not in full.names:
        raise InputError(f"unknown candidate {name!r}")
    return full.candidate_id(name)


def _load(args) -> tuple[PartialRankMatrix, ScoringVector, int]:
    full = read_profile(args.profile)
    if not full.is_complete:
        raise InputError("the profile to explain must be complete")
    rule = parse_rule(args.rule, full.m)
    return full, rule, pick_winner(full, rule, args.winner)


def cmd_explain(args) -> int:
    full, rule, w = _load(args)
    seed = None
    if args.seed is not None:
        seed = read_profile(args.seed)
        if (seed.n, seed.m) != (full.n, full.m) or seed.names != full.names:
            raise InputError("seed does not match the profile dimensions or names")
    if args.kind == "axp":
        xp = find_iaxp(full, rule, w, seed, backend=args.backend)
    elif args.kind == "cxp":
        xp = find_cxp(full, rule, w, seed, backend=args.backend)
    elif args.kind == "smallest-axp":
        xp = find_smallest_iaxp(full, rule, w, backend=args.backend, method=args.method)
    else:
        xp = find_smallest_cxp(full, rule, w, backend=args.backend)
    print(xp.to_json())
    return EXIT_OK


def cmd_enumerate(args) -> int:
    full, rule, w = _load(args)
    iaxps, cxps = enumerate_xps(full, rule, w, limit=args.limit, backend=args.backend)
    for xp in iaxps + cxps:
        print(xp.to_json())
    summary = {"iaxp_count": len(iaxps), "cxp_count": len(cxps)}
    if args.limit is not None:
        summary["truncated"] = len(iaxps) + len(cxps) >= args.limit
    status = EXIT_OK
    if args.oracle:
        ref_i, ref_c = brute_xps(full, rule, w)
        agree = {x.cellset() for x in ref_i} == {x.cellset() for x in iaxps} and {
            x.cellset() for x in ref_c
        } == {x.cellset() for x in cxps}
        summary["oracle"] = "agree" if agree else "disagree"
        if not agree:
            status = EXIT_INTERNAL
    print(json.dumps(summary))
    return status


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.culture is not None:
        spec = f"{args.culture} {args.count}\n"
    elif args.spec is not None:
        spec = Path(args.spec).read_text()
    else:
        spec = cultures.DEFAULT_DATASET
    data = cultures.generate_dataset(spec, args.n, args.m, args.seed)
    rows = []
    for k, (profile, label) in enumerate(data):
        name = f"{k:03d}_{label.replace(':', '-')}.prof"
        write_profile(profile, out / name)
        rows.append((k, label, name))
    with open(out / "dataset.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("profile_id", "culture", "file"))
        writer.writerows(rows)
    print(json.dumps({"profiles": len(rows), "out": str(out)}))
    return EXIT_OK


def _dataset(args) -> list[tuple[str, str, PartialRankMatrix]]:
    """``(profile_id, culture, profile)`` triples from the chosen source."""
    if args.dataset is not None:
        root = Path(args.dataset)
        manifest = root / "dataset.csv"
        if manifest.exists():
            with open(manifest, newline="") as fh:
                return [
                    (row["profile_id"], row["culture"], read_profile(root / row["file"]))
                    for row in csv.DictReader(fh)
                ]
        files = sorted(root.glob("*.prof"))
        if not files:
            raise InputError(f"no profiles found in {root}")
        return [(f.stem, "unknown", read_profile(f)) for f in files]
    if args.profiles:
        return [(Path(f).stem, "unknown", read_profile(f)) for f in args.profiles]
    spec = Path(args.spec).read_text() if args.spec else None
    data = cultures.generate_dataset(spec, args.n, args.m, args.seed)
    return [(str(k), label, p) for k, (p, label) in enumerate(data)]


def analyze_profile(task) -> dict:
    """Analysis record of one profile (module level so workers can pickle it)."""
    pid, culture, profile, rule_spec, method = task
    rule = parse_rule(rule_spec, profile.m)
    w = pick_winner(profile, rule, None)
    xp = find_smallest_iaxp(profile, rule, w, method=method)
    return {
        "profile_id": pid,
        "culture": culture,
        "n": profile.n,
        "m": profile.m,
        "agreement": float(metrics.agreement_index(profile)),
        "margin_of_victory": metrics.margin_of_victory(profile, rule),
        "siaxp_size": xp.size,
        "siaxp_norm": xp.size / (profile.n * profile.m),
    }


def _map_tasks(func, tasks, jobs):
    if jobs > 1:
        from multiprocessing import Pool

        with Pool(jobs) as pool:
            return pool.map(func, tasks)
    return [func(t) for t in tasks]


def _spearman_or_none(xs, ys):
    try:
        return metrics.spearman(xs, ys)
    except ValueError:
        return None


def analysis_summary(records: list[dict], seconds: float) -> dict:
    norm = [r["siaxp_norm"] for r in records]
    return {
        "profiles": len(records),
        "spearman_siaxp_agreement": _spearman_or_none(norm, [r["agreement"] for r in records]),
        "spearman_siaxp_margin": _spearman_or_none(norm, [r["margin_of_victory"] for r in records]),
        "seconds": round(seconds, 3),
    }


def run_analysis(data, rule: str = "borda", method: str = "rows", jobs: int = 1) -> list[dict]:
    tasks = [(pid, culture, p, rule, method) for pid, culture, p in data]
    return _map_tasks(analyze_profile, tasks, jobs)


def _write_records(records, fmt, fh) -> None:
    if fmt == "json":
        for r in records:
            fh.write(json.dumps(r) + "\n")
        return
    writer = csv.DictWriter(fh, fieldnames=ANALYSIS_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)


def cmd_analyze(args) -> int:
    start = time.perf_counter()
    records = run_analysis(_dataset(args), args.rule, args.method, args.jobs)
    summary = analysis_summary(records, time.perf_counter() - start)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            _write_records(records, args.format, fh)
        print(json.dumps(summary))
    else:
        _write_records(records, args.format, sys.stdout)
        print(json.dumps(summary), file=sys.stderr)
    if args.summary:
        Path(args.summary).write_text(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def cmd_map(args) -> int:
    data = _dataset(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    profiles = [p for _, _, p in data]
    ids = [pid for pid, _, _ in data]
    labels = [culture for _, culture, _ in data]
    d = mapelect.distance_matrix(profiles, jobs=args.jobs)
    pts = mapelect.mds_embed(d)
    with open(out / "distances.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["profile_id"] + ids)
        for pid, row in zip(ids, d):
            writer.writerow([pid] + [int(x) for x in row])
    with open(out / "embedding.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("profile_id", "x", "y", "culture"))
        for pid, (x, y), label in zip(ids, pts, labels):
            writer.writerow((pid, f"{x:.6f}", f"{y:.6f}", label))
    (out / "map.svg").write_text(mapelect.render_svg(pts, labels, title="profiles by culture"))
    records = run_analysis(data, args.rule, args.method, args.jobs)
    values = [r["siaxp_norm"] for r in records]
    (out / "map_siaxp.svg").write_text(
        mapelect.render_svg(pts, labels, values=values, title="smallest iAXp size / nm")
    )
    print(json.dumps({"profiles": len(profiles), "out": str(out)}))
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="votexp", description="Explanations for scoring-rule winners.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def explained(p):
        p.add_argument("--profile", required=True, help="complete profile file")
        p.add_argument("--rule", default="borda", help="borda | plurality | kapproval:K | vector:w1,...")
        p.add_argument("--winner", help="candidate name (default: first co-winner by name)")
        p.add_argument("--backend", choices=("cython", "python"), help="kernel backend")

    p = sub.add_parser("explain", help="compute one explanation")
    p.add_argument("kind", choices=("axp", "cxp", "smallest-axp", "smallest-cxp"))
    explained(p)
    p.add_argument("--seed", help="partial profile to start from (axp, cxp)")
    p.add_argument("--method", choices=SMALLEST_METHODS, default="hitting-set", help="smallest-axp solver")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("enumerate", help="all iAXps and CXps as JSON lines")
    explained(p)
    p.add_argument("--limit", type=_positive, help="stop after this many explanations")
    p.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("generate", help="write synthetic profiles")
    p.add_argument("--culture", help="kind[:param], e.g. ic, mallows:0.5, identity")
    p.add_argument("--spec", help="dataset spec file (lines 'kind[:param] count')")
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("-n", type=_positive, default=12)
    p.add_argument("-m", type=_positive, default=4)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", default="dataset")
    p.set_defaults(func=cmd_generate)

    def sourced(p):
        p.add_argument("--dataset", help="directory written by 'generate'")
        p.add_argument("--profile", dest="profiles", action="append", help="profile file (repeatable)")
        p.add_argument("--spec", help="dataset spec to generate in memory")
        p.add_argument("-n", type=_positive, default=12)
        p.add_argument("-m", type=_positive, default=4)
        p.add_argument("--seed", type=int, default=0, help="master seed for in-memory generation")
        p.add_argument("--rule", default="borda")
        p.add_argument("--method", choices=SMALLEST_METHODS, default="rows", help="smallest-iAXp solver")
        p.add_argument("--jobs", type=_positive, default=1)

    p = sub.add_parser("analyze", help="per-profile statistics and correlations")
    sourced(p)
    p.add_argument("--out", help="write records here (default: stdout)")
    p.add_argument("--summary", help="also write the summary JSON here")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("map", help="distance matrix, embedding and SVG maps")
    sourced(p)
    p.add_argument("--out", default="map")
    p.set_defaults(func=cmd_map)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (OracleLimitError, mapelect.MapLimitError) as exc:
        print(f"votexp: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, ProfileError, RuleError, PreconditionError, cultures.CultureError,
            mapelect.MapError, OSError) as exc:
        print(f"votexp: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - last-resort diagnostic
        log.debug("internal error", exc_info=True)
        print(f"votexp: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
