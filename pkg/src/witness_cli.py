"""
Witness Toolkit Command Line
Subcommands: build, eval, simulate, sweep, verify, criteria

Exit codes:
    0  entanglement detected / checks passed
    3  not detected / a check failed
    2  usage error
    4  data or witness error
    1  unexpected error
"""

import argparse
import math
import sys
import traceback
from pathlib import Path
from typing import List, Optional

ROOT = Path(__file__).resolve().parent.parent
for entry in (ROOT, ROOT / "src"):
    if str(entry) not in sys.path:
        sys.path.insert(0, str(entry))

import numpy as np  # noqa: E402

from config_manager import DEFAULT_CONFIG_PATH, ConfigManager, load_config  # noqa: E402
from data_io import (  # noqa: E402
    correlations_from_counts,
    merge_correlations,
    parse_angle,
    parse_correlations,
    parse_counts,
    published_correlations,
    read_witness,
    write_correlations,
    write_counts,
    write_oracle_reports,
    write_report,
    write_witness,
)
from errors import ArgumentError, DataError, WitnessError  # noqa: E402
from evaluator import EvaluationReport, sweep_to_frame, theta_sweep, evaluate  # noqa: E402
from pauli_core import MeasurementSetting  # noqa: E402
from state_engine import (  # noqa: E402
    add_white_noise,
    make_state,
    nonvanishing_correlations,
    simulate_counts,
)
from verification_oracle import check_all  # noqa: E402
from witness_builder import CriterionKind, build_combined_witness, named_criteria  # noqa: E402

EXIT_DETECTED = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_NOT_DETECTED = 3
EXIT_DATA = 4


def _settings(text: Optional[str]) -> Optional[List[MeasurementSetting]]:
    if text is None or text.strip().lower() == "auto":
        return None
    labels = [s.strip() for s in text.split(",") if s.strip()]
    if not labels:
        raise ArgumentError("--settings needs at least one setting such as 3333,1221")
    return [MeasurementSetting.from_label(s) for s in labels]


def _option(value, config: ConfigManager, *keys):
    """Command-line value when given, else the config entry"""
    return value if value is not None else config.get(*keys)


def _positive(value: int, flag: str) -> int:
    if value < 1:
        raise ArgumentError(f"{flag} must be at least 1")
    return value


def _state(args):
    return make_state(args.state, args.n, excitations=args.excitations,
                      theta=parse_angle(args.theta), phi=parse_angle(args.phi))


def _print_report(report: EvaluationReport) -> None:
    print("\n" + "=" * 60)
    print("📊 EVALUATION REPORT")
    print("=" * 60)
    print(f"\nWitness: {report.witness_id}")
    print(f"Value: {report.value:.5f} ± {report.stderr:.5f} (threshold {report.threshold:.5f})")
    print(f"Significance: {report.significance:.1f} σ")
    if report.per_cut:
        print("\nPer-cut criteria (bound 1/2):")
        for r in report.per_cut:
            if r.value is None:
                print(f"  {r.cut:>6}  unavailable")
                continue
            mark = "✓" if r.detected else "✗"
            print(f"  {mark} {r.cut:>6}  {r.value:.4f} ± {r.stderr:.4f}  ({r.significance:.1f} σ)")
    print(f"\nVerdict: {report.verdict.value}")


def cmd_build(args, config: ConfigManager) -> int:
    state = _state(args)
    corrs = nonvanishing_correlations(state, config.get("tolerances", "nonvanishing"))
    min_abs = args.min_abs if args.min_abs is not None else config.get("tolerances", "min_abs")
    print(f"🧮 Building witness for {args.state} on {args.n} qubits")
    spec = build_combined_witness(corrs, _settings(args.settings), min_abs,
                                  family=args.state, verbose=True,
                                  n_candidates=config.get("auto_settings", "candidates"))
    print(f"   Operators: {', '.join(j.label for j in spec.operators)}")
    print(f"   Weights:   {', '.join(str(w) for w in spec.weights)}")
    print(f"   G = {spec.g}, G0 = {spec.g0}, threshold {spec.threshold} ≈ {float(spec.threshold):.6f}")
    if args.out:
        write_witness(spec, args.out)
        print(f"✓ Witness written to {args.out}")
    return EXIT_DETECTED


def cmd_eval(args, config: ConfigManager) -> int:
    witness = read_witness(args.witness)
    if args.published:
        if args.correlations or args.counts:
            raise ArgumentError("--published cannot be combined with --correlations or --counts")
        corrs = published_correlations(args.published)
    else:
        sources = []
        if args.correlations:
            sources.append(parse_correlations(args.correlations))
        if args.counts:
            sources.append(correlations_from_counts(parse_counts(args.counts)))
        if not sources:
            raise ArgumentError("eval needs --correlations, --counts or --published")
        corrs = merge_correlations(*sources)
    report = evaluate(witness, corrs)
    _print_report(report)
    if args.report:
        write_report(report, args.report)
        print(f"✓ Report written to {args.report}")
    return EXIT_DETECTED if report.detected else EXIT_NOT_DETECTED


def cmd_simulate(args, config: ConfigManager) -> int:
    settings = _settings(args.settings)
    if not settings:
        raise ArgumentError("simulate needs explicit --settings")
    shots = _positive(_option(args.shots, config, "sampling", "shots"), "--shots")
    seed = _option(args.seed, config, "sampling", "seed")
    rho = add_white_noise(_state(args), args.noise_p)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(len(settings))]
    records = [simulate_counts(rho, k, shots, s) for k, s in zip(settings, seeds)]
    write_counts(records, args.out)
    print(f"✓ {len(records)} setting(s) × {shots} shots written to {args.out}")
    if args.correlations_out:
        write_correlations(correlations_from_counts(records), args.correlations_out,
                           source=f"simulated {args.state}, p={args.noise_p}, seed={seed}")
        print(f"✓ Estimated correlations written to {args.correlations_out}")
    return EXIT_DETECTED


def cmd_sweep(args, config: ConfigManager) -> int:
    phi = parse_angle(args.phi if args.phi is not None else str(config.get("sweep", "phi")))
    steps = _positive(_option(args.steps, config, "sweep", "steps"), "--steps")
    noise_p = _option(args.noise_p, config, "sweep", "noise_p")
    thetas = np.linspace(0.0, math.pi / 4, steps) if steps > 1 else np.array([0.0])
    points = theta_sweep(phi, thetas, noise_p, target_fidelity=args.target_fidelity)
    frame = sweep_to_frame(points)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(args.out, index=False)
        print(f"✓ {len(frame)} sweep points written to {args.out}")
    else:
        print(frame.to_string(index=False))
    return EXIT_DETECTED


def cmd_verify(args, config: ConfigManager) -> int:
    if args.family:
        witness = named_criteria(args.family).combined
        if witness is None:
            raise ArgumentError(f"{args.family} has no combined witness")
    elif args.witness:
        witness = read_witness(args.witness)
    else:
        raise ArgumentError("verify needs --witness or --family")
    samples = _positive(_option(args.samples, config, "oracle", "trials"), "--samples")
    seed = _option(args.seed, config, "sampling", "seed")
    print(f"🔬 Running oracle suites on {witness.witness_id} ({samples} trials each)")
    reports = check_all(witness, trials=samples, seed=seed,
                        restarts=_positive(_option(args.restarts, config, "oracle", "restarts"),
                                           "--restarts"),
                        components=config.get("oracle", "components"),
                        workers=_positive(_option(args.workers, config, "oracle", "workers"),
                                          "--workers"),
                        slack=config.get("tolerances", "oracle_slack"))

    print("\n" + "=" * 60)
    print(f"{'suite':<22}{'max':>12}{'bound':>12}{'margin':>12}  ok")
    print("=" * 60)
    for r in reports:
        if not r.applicable:
            print(f"{r.suite:<22}{'not applicable':>36}  -")
            continue
        mark = "✓" if r.passed else "✗"
        print(f"{r.suite:<22}{r.max_observed:>12.6f}{r.bound:>12.6f}{r.margin:>12.2e}  {mark}")
    if args.report:
        write_oracle_reports(reports, args.report)
        print(f"✓ Oracle report written to {args.report}")
    passed = all(r.passed for r in reports)
    print("\n✓ All suites passed" if passed else "\n✗ Bound violation observed")
    return EXIT_DETECTED if passed else EXIT_NOT_DETECTED


def cmd_criteria(args, config: ConfigManager) -> int:
    named = named_criteria(args.family)
    print(f"📊 Published criteria for {named.family.value}")
    for c in named.criteria:
        if c.kind is CriterionKind.AVERAGED:
            terms = f"mean(T² of {', '.join(j.label for j in c.class_a)})"
        else:
            terms = (f"1/2 [mean(T² of {', '.join(j.label for j in c.class_a)}) + "
                     f"mean(T² of {', '.join(j.label for j in c.class_b)})]")
        print(f"  {c.cut.label:>6}: {terms} ≤ {c.bound}   ideal {c.ideal_score:.4f}")
    if named.combined is not None:
        w = named.combined
        print(f"\nCombined: G = {w.g}, G0 = {w.g0}, threshold {w.threshold}, "
              f"ideal {w.metadata['ideal_value']}")
    else:
        print("\nNo combined witness")
    return EXIT_DETECTED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="witness", description="Minimal-effort entanglement witnesses")
    parser.add_argument("--config", default=str(DEFAULT_CONFIG_PATH), help="YAML configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    def state_options(p):
        p.add_argument("--state", required=True, help="ghz, cluster4, cluster, dicke, w, singlet4, psi, ghz_prime")
        p.add_argument("--n", type=int, default=4)
        p.add_argument("--excitations", type=int, default=None)
        p.add_argument("--theta", default="0")
        p.add_argument("--phi", default="0")

    p = sub.add_parser("build", help="construct a combined witness")
    state_options(p)
    p.add_argument("--settings", default="auto", help="comma-separated settings or 'auto'")
    p.add_argument("--min-abs", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_build)

    p = sub.add_parser("eval", help="evaluate a witness on data")
    p.add_argument("--witness", required=True)
    p.add_argument("--correlations", help="correlation file (CSV or JSON)")
    p.add_argument("--counts", help="counts JSON; merged with --correlations when both are given")
    p.add_argument("--published", choices=["ghz4", "cluster4"],
                   help="measured correlations from the catalog; used on its own")
    p.add_argument("--report")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("simulate", help="sample measurement counts")
    state_options(p)
    p.add_argument("--noise-p", type=float, default=1.0)
    p.add_argument("--settings", required=True)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--correlations-out")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", help="θ-sweep of Ψ(θ,φ)")
    p.add_argument("--phi", default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--noise-p", type=float, default=None)
    p.add_argument("--target-fidelity", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify", help="run the verification oracle")
    p.add_argument("--witness")
    p.add_argument("--family", choices=["ghz4", "cluster4", "dicke42", "singlet4"])
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--report")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("criteria", help="print published per-cut criteria")
    p.add_argument("--family", required=True, choices=["ghz4", "cluster4", "dicke42", "singlet4", "w4"])
    p.set_defaults(handler=cmd_criteria)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = load_config(args.config)
        return args.handler(args, config)
    except ArgumentError as e:
        print(f"✗ Usage error: {e}")
        return EXIT_USAGE
    except (DataError, OSError) as e:
        print(f"❌ Data error: {e}")
        return EXIT_DATA
    except WitnessError as e:
        print(f"❌ Error: {e}")
        return EXIT_DATA
    except Exception as e:
        print(f"\n❌ Error: {e}")
        traceback.print_exc()
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
