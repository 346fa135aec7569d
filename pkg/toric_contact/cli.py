"""
Command line entry points: build reference fans, validate and analyze fan
files, inspect the Mori cone, classify contact structures and run surveys.

Reports go to stdout as `key: value` lines (or one JSON object with --json);
logging goes to stderr.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .builders import (
    fan_hirzebruch,
    fan_p1_power,
    fan_projective_space,
    fan_projectivized_split_bundle,
    fan_projectivized_tangent_p1_power,
)
from .classify import classify_contact
from .config import settings
from .divisor import canonical_divisor, class_of, picard_rank
from .errors import ConsistencyError, FanSyntaxError, ToricError
from .fan import is_complete, is_smooth, projectivity_witness, validate, walls
from .fanfile import load_fan, parse_fan, serialize_fan
from .models import TDivisor
from .mori import anticanonical_degree, contraction_profile, curve_class, extremal_rays, is_fano
from .orchestrator import SurveyOrchestrator
from .state import STATE

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SYNTAX = 2
EXIT_SEMANTIC = 3
EXIT_USAGE = 64
EXIT_INTERNAL = 70
EXIT_IO = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FanSyntaxError(f"{path} is not UTF-8 text: {exc.reason}") from None


def _emit(args: argparse.Namespace, lines: List[str], payload: Dict[str, Any]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _fmt(values: Sequence) -> str:
    return "[" + ",".join(str(v) for v in values) + "]"


def _yes(flag: Optional[bool]) -> str:
    return "n/a" if flag is None else ("yes" if flag else "no")


def _parse_degrees(text: str, num_rays: int) -> List[TDivisor]:
    degrees = []
    for chunk in text.split(";"):
        try:
            values = [int(x) for x in chunk.split(",")]
        except ValueError:
            raise UsageError(f"--degrees: '{chunk}' is not a comma-separated list of integers") from None
        if len(values) != num_rays:
            raise UsageError(f"--degrees: '{chunk}' has {len(values)} entries, the base has {num_rays} rays")
        degrees.append(TDivisor.from_sequence(values))
    return degrees


def cmd_build(args: argparse.Namespace) -> int:
    if args.kind == "pn":
        fan = fan_projective_space(args.dim)
    elif args.kind == "p1pow":
        fan = fan_p1_power(args.m)
    elif args.kind == "hirzebruch":
        fan = fan_hirzebruch(args.a)
    elif args.kind == "ptangent":
        fan = fan_projectivized_tangent_p1_power(args.m)
    else:
        base = parse_fan(_read(args.base))
        fan = fan_projectivized_split_bundle(base, _parse_degrees(args.degrees, base.num_rays))

    text = serialize_fan(fan) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info(f"Wrote fan of rank {fan.rank} to {args.output}.")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    report = validate(load_fan(_read(args.file)))
    lines = ["valid: yes" if report.is_valid else "valid: no"]
    lines += [f"violation: {v.code}: {v.message}" for v in report.violations]
    _emit(args, lines, {"valid": report.is_valid, "violations": [v.model_dump(mode="json") for v in report.violations]})
    return EXIT_OK if report.is_valid else EXIT_SEMANTIC


def cmd_analyze(args: argparse.Namespace) -> int:
    fan = parse_fan(_read(args.file))
    smooth = is_smooth(fan)
    complete = is_complete(fan)
    payload: Dict[str, Any] = {"rank": fan.rank, "rays": fan.num_rays, "max_cones": len(fan.max_cones),
                               "smooth": smooth, "complete": complete, "projective": None}
    if smooth and complete:
        witness = projectivity_witness(fan)
        canonical = class_of(fan, canonical_divisor(fan))
        payload.update(
            projective=witness is not None,
            picard_rank=picard_rank(fan),
            canonical_class=list(canonical.class_vector),
            anticanonical_class=[-x for x in canonical.class_vector],
            fano=is_fano(fan),
            support_function=[str(h) for h in witness.values] if witness else None,
        )

    lines = [f"{key}: {payload[key]}" for key in ("rank", "rays", "max_cones")]
    lines += [f"{key}: {_yes(payload[key])}" for key in ("smooth", "complete", "projective")]
    if "picard_rank" in payload:
        lines.append(f"picard_rank: {payload['picard_rank']}")
        lines.append(f"canonical_class: {_fmt(payload['canonical_class'])}")
        lines.append(f"anticanonical_class: {_fmt(payload['anticanonical_class'])}")
        lines.append(f"fano: {_yes(payload['fano'])}")
        if payload["support_function"]:
            lines.append(f"support_function: {_fmt(payload['support_function'])}")
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_mori(args: argparse.Namespace) -> int:
    fan = parse_fan(_read(args.file))
    rays = extremal_rays(fan)
    wall_rows = []
    lines = []
    for wall in walls(fan):
        c = curve_class(fan, wall)
        wall_rows.append({"tau": list(wall.tau), "sigma": list(wall.sigma), "sigma_prime": list(wall.sigma_prime),
                          "relation": {str(k): v for k, v in wall.relation.items()},
                          "class": list(c.pairing), "anticanonical_degree": anticanonical_degree(fan, c)})
        lines.append(
            f"wall: tau={_fmt(wall.tau)} sigma={_fmt(wall.sigma)} sigma'={_fmt(wall.sigma_prime)} "
            f"class={_fmt(c.pairing)} -K.C={anticanonical_degree(fan, c)}"
        )

    ray_rows = []
    for r in rays:
        profile = contraction_profile(fan, r)
        ray_rows.append(profile.model_dump(mode="json"))
        lines.append(
            f"extremal_ray: class={_fmt(r.pairing)} length={profile.length} type={profile.type.value} "
            f"locus_dim={profile.locus_dim} fiber_dim={profile.fiber_dim} image_dim={profile.image_dim}"
        )
    _emit(args, lines, {"walls": wall_rows, "extremal_rays": ray_rows})
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    fan = parse_fan(_read(args.file))
    report = classify_contact(fan, full_evidence=args.full_evidence)
    ev = report.evidence
    lines = [report.verdict.line, f"dimension: {ev.dimension}", f"odd_dimension: {_yes(ev.odd_dimension)}"]
    if ev.n is not None:
        lines.append(f"n: {ev.n}")
    if ev.picard_rank is not None:
        lines += [
            f"picard_rank: {ev.picard_rank}",
            f"fano: {_yes(ev.fano)}",
            f"anticanonical_class: {_fmt(ev.anticanonical_class)}",
            f"anticanonical_divisible: {_yes(ev.anticanonical_divisible)}",
        ]
        if ev.contact_line_class is not None:
            lines.append(f"contact_line_class: {_fmt(ev.contact_line_class)}")
        lines += [f"extremal_lengths: {_fmt(ev.extremal_lengths)}", f"length_dichotomy: {_yes(ev.length_dichotomy)}"]
    lines += [f"projective_space_test: {_yes(ev.projective_space_test)}",
              f"p1_tangent_test: {_yes(ev.p1_tangent_test)}"]
    if ev.isomorphism is not None:
        lines.append(f"isomorphism_matrix: {_fmt(_fmt(row) for row in ev.isomorphism.matrix)}")
        lines.append(f"isomorphism_rays: {_fmt(ev.isomorphism.ray_permutation)}")
    lines += [f"note: {note}" for note in ev.notes]

    payload = report.model_dump(mode="json")
    payload["verdict"]["line"] = report.verdict.line
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_survey(args: argparse.Namespace) -> int:
    entries = [(path, _read(path)) for path in args.files]
    orchestrator = SurveyOrchestrator()
    started = orchestrator.start_survey(entries, images=args.images, seed=args.seed)
    status = orchestrator.get_survey_status(started["run_id"])

    jobs = STATE.get_jobs_for_run(started["run_id"])
    lines = [f"survey: {started['run_id']}", f"status: {status['run_status']}"]
    for job in jobs:
        outcome = job.verdict if job.status == "DONE" else f"{job.status} {job.last_error or ''}".strip()
        lines.append(f"job: {job.label}: {outcome}")
    if status["summary"]:
        lines += [f"{key}: {value}" for key, value in status["summary"].items()]
    payload = dict(status, jobs=[job.model_dump(mode="json", include={"id", "label", "status", "verdict",
                                                                        "split_tangent_consistent",
                                                                        "image_disagreements", "last_error"})
                                 for job in jobs])
    _emit(args, lines, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toric-contact", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--log-level", default=settings.log_level,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level (stderr).")
    commands = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="Emit one JSON object instead of key: value lines.")

    build = commands.add_parser("build", help="Write a reference fan.")
    kinds = build.add_subparsers(dest="kind", required=True)
    kinds.add_parser("pn", help="Projective space P^N.").add_argument("--dim", type=int, required=True)
    kinds.add_parser("p1pow", help="(P^1)^M.").add_argument("--m", type=int, required=True)
    kinds.add_parser("hirzebruch", help="Hirzebruch surface F_A.").add_argument("--a", type=int, required=True)
    kinds.add_parser("ptangent", help="P(T) over (P^1)^M.").add_argument("--m", type=int, required=True)
    bundle = kinds.add_parser("pbundle", help="Projectivized split bundle over a base fan.")
    bundle.add_argument("--base", required=True, help="Base fan file.")
    bundle.add_argument("--degrees", required=True,
                        help="Degree divisors on the base rays, e.g. '0,0,0;2,0,0' (first must be zero).")
    for sub in kinds.choices.values():
        sub.add_argument("-o", "--output", help="Output file (default: stdout).")
    build.set_defaults(handler=cmd_build, json=False)

    for name, handler, help_text in (
        ("validate", cmd_validate, "Report every structural violation of a fan file."),
        ("analyze", cmd_analyze, "Smoothness, completeness, projectivity and divisor classes."),
        ("mori", cmd_mori, "Walls, curve classes, extremal rays and contractions."),
        ("classify", cmd_classify, "Decide whether the variety carries a contact structure."),
    ):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("file")
        sub.set_defaults(handler=handler)
        if name == "classify":
            sub.add_argument("--full-evidence", action="store_true",
                             help="Run both isomorphism tests even when -K is not divisible by n+1.")

    survey = commands.add_parser("survey", parents=[common], help="Classify a batch of fan files.")
    survey.add_argument("files", nargs="+")
    survey.add_argument("--images", type=int, default=0, help="Random unimodular images checked per fan.")
    survey.add_argument("--seed", type=int, default=0)
    survey.set_defaults(handler=cmd_survey)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FanSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except ToricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except ConsistencyError as exc:
        logger.exception(f"Internal consistency check failed: {exc}")
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
