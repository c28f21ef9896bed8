"""
Command-line front end.

    greedylab norm --space lp:0.5 --vec "1@1,1@2"
    greedylab verify --space "dsum(lp:1,lp:2)" --dim 8 --seed 7 --format csv
    greedylab examples --name kt-not-qg --q 2 --N 65536 --format json

Reports go to standard output (or --out); logs go to standard error. Exit
codes: 0 on success, 1 when a check fails, 2 on usage errors.
"""

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import structlog
from pydantic import BaseModel, Field, ValidationError

from greedylab import __version__
from greedylab.basis.approximation import sigma, sigma_tilde
from greedylab.basis.greedy import greedy_projection, greedy_trace
from greedylab.basis.models import BasisModel, LatticeModel
from greedylab.constants.democracy import democracy_functions
from greedylab.constants.estimators import Witness, estimate_all
from greedylab.constants.families import TestFamily
from greedylab.errors import GreedyLabError, ParameterError
from greedylab.foundations.contracts import CheckStatus, ConstantKind, RenormKind, ReportFormat
from greedylab.foundations.vectors import SpVec
from greedylab.foundations.weights import WeightSpec
from greedylab.gallery import (
    BlockSchedule,
    garling_gamma_lower_bound,
    garling_l1_escape,
    hilbert_block_report,
    kt_not_qg_witness,
    kt_qg_bound_check,
    kt_urp_constant,
    lplq_succ_not_lucc_report,
    random_samples,
    t_eta_check,
    vp_alternating_report,
)
from greedylab.renorm import RenormedSpace, renorm_isometry_check
from greedylab.runtime.logging import (
    FileWitnessSink,
    WitnessRecord,
    WitnessSink,
    configure_logging,
)
from greedylab.spaces.grammar import parse_space, parse_weight
from greedylab.spaces.regularity import hardy_check, prefix_family, weight_report
from greedylab.spaces.runlength import RunLengthVector
from greedylab.verify.checks import SuiteConfig
from greedylab.verify.report import report_emit
from greedylab.verify.suite import failed, run_suite

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class Command(str, Enum):
    NORM = "norm"
    GREEDY = "greedy"
    SIGMA = "sigma"
    CONSTANTS = "constants"
    DEMOCRACY = "democracy"
    WEIGHTS = "weights"
    RENORM = "renorm"
    EXAMPLES = "examples"
    VERIFY = "verify"


class CliConfig(BaseModel):
    """Validated command-line options; identical configs give identical reports."""

    command: Command
    spaces: List[str] = Field(default_factory=list, description="Space descriptions")
    vec: Optional[str] = Field(None, description="Vector literal <coef>@<index>,...")
    weight: Optional[str] = Field(None, description="Weight description, e.g. pot:0.5")
    m: Optional[int] = Field(None, ge=0, description="Number of terms or largest cardinality")
    dim: int = Field(8, ge=1, le=64, description="Index range of the search families")
    seed: int = Field(0, ge=0, lt=2**64, description="Seed of every randomized family")
    budget_signs: int = Field(6, ge=0, le=16, description="Enumerate all signs up to this size")
    budget_random: int = Field(32, ge=0, description="Random draws per family")
    format: ReportFormat = ReportFormat.TEXT
    tol: float = Field(1e-9, ge=0.0, description="Relative slack of the checks")
    name: Optional[str] = Field(None, description="Example or renorming name")
    checks: List[str] = Field(default_factory=list, description="Check ids for verify")
    p: Optional[float] = Field(None, gt=0.0)
    q: Optional[float] = Field(None, gt=0.0)
    r: Optional[float] = Field(None, gt=1.0)
    N: Optional[int] = Field(None, ge=1)
    schedule: BlockSchedule = BlockSchedule.LINEAR
    out: Optional[Path] = None
    witness_log: Optional[Path] = None
    log_level: str = "warning"
    workers: Optional[int] = Field(None, ge=1)

    def family(self) -> TestFamily:
        return TestFamily(
            dimension=self.dim,
            exhaustive_signs=self.budget_signs,
            n_random=self.budget_random,
            seed=self.seed,
        )


@dataclasses.dataclass
class Output:
    """What a command produced: structured data or an already rendered report."""

    data: Any = None
    rendered: Optional[str] = None
    text: Optional[str] = None  # Plain-text override for the text format
    exit_code: int = EXIT_OK
    records: List[WitnessRecord] = dataclasses.field(default_factory=list)


def _number(value: float) -> Union[float, str]:
    if math.isfinite(value):
        return float(value)
    return "inf" if value > 0 else ("-inf" if value < 0 else "nan")


def plain(value: Any) -> Any:
    """Convert report values to JSON-ready builtins; vectors become literals."""
    if isinstance(value, SpVec):
        return value.serialize()
    if isinstance(value, RunLengthVector):
        return {"length": value.length, "runs": len(value.counts), "digest": value.digest()}
    if isinstance(value, Witness):
        return value.describe()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _number(float(value))
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (frozenset, set)):
        return sorted(plain(v) for v in value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    return value


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return str(value)


def render(data: Any, fmt: ReportFormat) -> str:
    """Render a dict (one record) or a list of dicts (a table)."""
    data = plain(data)
    if fmt == ReportFormat.JSON:
        return json.dumps(data, indent=2) + "\n"
    rows = data if isinstance(data, list) else [data]
    columns: List[str] = []
    for row in rows:
        columns += [key for key in row if key not in columns]
    if fmt == ReportFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) if c in row else "" for c in columns])
        return buffer.getvalue()
    if isinstance(data, dict):
        return "".join(f"{key}: {_fmt(value)}\n" for key, value in data.items())
    return "".join(
        "  ".join(f"{key}={_fmt(value)}" for key, value in row.items()) + "\n" for row in rows
    )


# --- helpers ---


def _model(config: CliConfig) -> BasisModel:
    if len(config.spaces) != 1:
        raise ParameterError(f"{config.command.value} needs exactly one --space")
    return LatticeModel(parse_space(config.spaces[0]))


def _vector(config: CliConfig) -> SpVec:
    if config.vec is None:
        raise ParameterError(f"{config.command.value} needs --vec")
    return SpVec.parse(config.vec)


def _require_m(config: CliConfig) -> int:
    if config.m is None:
        raise ParameterError(f"{config.command.value} needs --m")
    return config.m


def _value(option: Optional[float], default: float) -> float:
    return default if option is None else option


# --- commands ---


def cmd_norm(config: CliConfig) -> Output:
    model = _model(config)
    f = _vector(config)
    value = model.norm(f)
    return Output(
        data={"space": model.label, "vector": f, "norm": value},
        text=f"{_fmt(float(value))}\n",
    )


def cmd_greedy(config: CliConfig) -> Output:
    model = _model(config)
    f = _vector(config)
    trace = greedy_trace(model, f)
    data: Dict[str, Any] = {
        "space": model.label,
        "vector": f,
        "ordering": trace.ordering,
        "residual_norms": trace.residual_norms,
    }
    if config.m is not None:
        data["m"] = config.m
        data["projection"] = greedy_projection(model, f, config.m)
    return Output(data=data)


def cmd_sigma(config: CliConfig) -> Output:
    model = _model(config)
    f = _vector(config)
    m = _require_m(config)
    best = sigma(model, f, m)
    by_projection = sigma_tilde(model, f, m)
    return Output(
        data={
            "space": model.label,
            "m": m,
            "sigma": best.value,
            "sigma_exact": best.is_exact,
            "sigma_set": best.witness,
            "sigma_tilde": by_projection.value,
            "sigma_tilde_exact": by_projection.is_exact,
            "sigma_tilde_set": by_projection.witness,
        }
    )


def cmd_constants(config: CliConfig) -> Output:
    model = _model(config)
    table = estimate_all(model, config.family(), workers=config.workers)
    rows: List[Dict[str, Any]] = []
    records: List[WitnessRecord] = []
    for kind in ConstantKind:
        if kind in table.unsupported:
            reason = f"unsupported: {table.unsupported[kind]}"
            rows.append({"kind": kind, "value": "", "evaluations": 0, "witness": reason})
            continue
        estimate = table.estimates[kind]
        literal = estimate.witness.describe()
        rows.append(
            {
                "kind": kind,
                "value": estimate.value,
                "evaluations": estimate.evaluations,
                "witness": literal,
            }
        )
        records.append(
            WitnessRecord(
                category="constant",
                subject=kind.value,
                space=model.label,
                value=estimate.value,
                witness={"witness": literal, "budget": estimate.budget},
                seed=config.seed,
            )
        )
    return Output(data=rows, records=records)


def cmd_democracy(config: CliConfig) -> Output:
    model = _model(config)
    m_max = config.m or config.dim
    phi = democracy_functions(model, m_max, config.family())
    rows = [
        {
            "m": m,
            "phi_u": phi.upper[i],
            "phi_l": phi.lower[i],
            "phi_u_signed": phi.upper_signed[i],
            "phi_l_signed": phi.lower_signed[i],
            "exact": phi.exact,
        }
        for i, m in enumerate(phi.m)
    ]
    return Output(data=rows)


def cmd_weights(config: CliConfig) -> Output:
    if config.weight is None:
        raise ParameterError("weights needs --weight")
    w = parse_weight(config.weight)
    data = plain(weight_report(w))
    if w.is_nonincreasing:
        q = _value(config.q, 2.0)
        hardy = hardy_check(w, q, prefix_family(config.N or 10))
        data.update(
            hardy_q=q,
            hardy_max_ratio=hardy.max_ratio,
            hardy_strictly_increasing=hardy.strictly_increasing,
            hardy_stabilizes=hardy.stabilizes,
        )
    return Output(data={"weight": w.label, **data})


def cmd_renorm(config: CliConfig) -> Output:
    model = _model(config)
    try:
        kind = RenormKind(config.name or RenormKind.CHAIN0.value)
    except ValueError:
        kinds = ", ".join(k.value for k in RenormKind)
        raise ParameterError(f"--name must be one of {kinds}, got {config.name}") from None
    renormed = RenormedSpace(model, kind, seed=config.seed)
    samples = [f for f in config.family().vectors(config.dim) if f]
    report = renorm_isometry_check(renormed, samples, config.tol)
    return Output(
        data={
            "renorming": renormed.label,
            "samples": report.samples,
            "instances": report.instances,
            "violations": report.violations,
            "skipped": report.skipped,
            "skip_reason": report.skip_reason,
            "worst_margin": report.worst_margin,
            "witness": report.witness,
            "note": report.note,
        },
        exit_code=EXIT_OK if report.passed else EXIT_FAIL,
    )


def _example_vp_alternating(config: CliConfig) -> Any:
    return vp_alternating_report(_value(config.p, 0.5), config.N or 64)


def _example_lplq(config: CliConfig) -> Any:
    return lplq_succ_not_lucc_report(_value(config.p, 0.5), _value(config.q, 2.0), config.N or 64)


def _example_hilbert(config: CliConfig) -> Any:
    return hilbert_block_report(config.N or 4, with_operator_norms=True, seed=config.seed)


def _example_kt_not_qg(config: CliConfig) -> Any:
    witness = kt_not_qg_witness(_value(config.q, 2.0), config.N or 64, config.schedule)
    return {
        "q": witness.q,
        "N": witness.N,
        "schedule": witness.schedule.value,
        "length": witness.g.length,
        "norm_g": witness.norm_g,
        "norm_h": witness.norm_h,
        "ratio": witness.ratio,
        "digest": witness.digest,
    }


def _example_kt_bound(config: CliConfig) -> Any:
    samples = random_samples(config.budget_random, config.dim, seed=config.seed)
    report = kt_qg_bound_check(_value(config.p, 2.0), _value(config.q, 2.0), samples)
    data = plain(report)
    data["passed"] = report.passed
    data["scan"] = [{"r": c.r, "value": c.value, "stabilized": c.stabilized} for c in report.scan]
    return data


def _example_kt_urp(config: CliConfig) -> Any:
    w = parse_weight(config.weight or "pot:0.5")
    return kt_urp_constant(w, _value(config.r, 1.5), config.N or 10_000)


def _example_t_eta(config: CliConfig) -> Any:
    blocks = config.N or 16
    return t_eta_check(_value(config.q, 2.0), list(range(1, blocks + 1)))


def _example_garling_escape(config: CliConfig) -> Any:
    return garling_l1_escape(_value(config.p, 0.25), config.N or 6)


def _example_garling_gamma(config: CliConfig) -> Any:
    w = parse_weight(config.weight) if config.weight else WeightSpec.potential(0.5)
    return garling_gamma_lower_bound(_value(config.p, 0.5), config.N or 64, w)


EXAMPLES: Dict[str, Callable[[CliConfig], Any]] = {
    "vp-alternating": _example_vp_alternating,
    "lplq": _example_lplq,
    "hilbert": _example_hilbert,
    "kt-not-qg": _example_kt_not_qg,
    "kt-bound": _example_kt_bound,
    "kt-urp": _example_kt_urp,
    "t-eta": _example_t_eta,
    "garling-escape": _example_garling_escape,
    "garling-gamma": _example_garling_gamma,
}


def cmd_examples(config: CliConfig) -> Output:
    if config.name not in EXAMPLES:
        raise ParameterError(
            f"--name must be one of {', '.join(sorted(EXAMPLES))}, got {config.name}"
        )
    data = plain(EXAMPLES[config.name](config))
    data = {"example": config.name, **data}
    ratio = data.get("ratio")
    record = WitnessRecord(
        category="example",
        subject=config.name,
        space="",
        value=float(ratio) if isinstance(ratio, (int, float)) else 0.0,
        witness={k: v for k, v in data.items() if k in ("digest", "witness")},
        seed=config.seed,
    )
    return Output(data=data, records=[record])


def cmd_verify(config: CliConfig) -> Output:
    if not config.spaces:
        raise ParameterError("verify needs at least one --space")
    models = [LatticeModel(parse_space(text)) for text in config.spaces]
    suite = SuiteConfig(tol=config.tol, workers=config.workers)
    results = run_suite(models, config.family(), config.checks or None, suite)
    records = [
        WitnessRecord(
            category="check",
            subject=r.check_id,
            space=r.space,
            value=r.margin,
            witness={"witness": r.witness_ref, "status": r.status.value},
            seed=config.seed,
        )
        for r in results
        if r.status != CheckStatus.SKIPPED
    ]
    return Output(
        rendered=report_emit(results, config.format),
        exit_code=EXIT_FAIL if failed(results) else EXIT_OK,
        records=records,
    )


COMMANDS: Dict[Command, Callable[[CliConfig], Output]] = {
    Command.NORM: cmd_norm,
    Command.GREEDY: cmd_greedy,
    Command.SIGMA: cmd_sigma,
    Command.CONSTANTS: cmd_constants,
    Command.DEMOCRACY: cmd_democracy,
    Command.WEIGHTS: cmd_weights,
    Command.RENORM: cmd_renorm,
    Command.EXAMPLES: cmd_examples,
    Command.VERIFY: cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greedylab",
        description="Greedy algorithm laboratory for quasi-Banach sequence spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("--space", dest="spaces", action="append", default=[],
                        help="Space description; repeat for verify")
    parser.add_argument("--vec", help='Vector literal, e.g. "1@1,-0.5@3"')
    parser.add_argument("--weight", help="Weight description, e.g. pot:0.5")
    parser.add_argument("--m", type=int, help="Number of terms or largest cardinality")
    parser.add_argument("--dim", type=int, default=8, help="Index range of search families")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget-signs", type=int, default=6)
    parser.add_argument("--budget-random", type=int, default=32)
    parser.add_argument("--format", choices=[f.value for f in ReportFormat], default="text")
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--name", help="Example name, or renorming kind for renorm")
    parser.add_argument("--check", dest="checks", action="append", default=[],
                        help="Check id for verify; repeat to select several")
    parser.add_argument("--p", type=float)
    parser.add_argument("--q", type=float)
    parser.add_argument("--r", type=float, help="Exponent r of C[s, r] for kt-urp")
    parser.add_argument("--N", type=int)
    parser.add_argument("--schedule", choices=[s.value for s in BlockSchedule], default="linear",
                        help="Block lengths of kt-not-qg")
    parser.add_argument("--out", type=Path, help="Write the report here instead of stdout")
    parser.add_argument("--witness-log", type=Path, help="JSONL witness file (.gz compresses)")
    parser.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    parser.add_argument("--workers", type=int, help="Thread pool size")
    return parser


def _emit(output: Output, config: CliConfig) -> None:
    if output.rendered is not None:
        text = output.rendered
    elif output.text is not None and config.format == ReportFormat.TEXT:
        text = output.text
    else:
        text = render(output.data, config.format)
    if config.out is not None:
        config.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if config.witness_log is not None:
        sink: WitnessSink = FileWitnessSink(config.witness_log)
        for record in output.records:
            sink.write(record)
        sink.close()


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        config = CliConfig(**vars(args))
    except ValidationError as exc:
        print(f"greedylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(config.log_level)
    try:
        output = COMMANDS[config.command](config)
        _emit(output, config)
    except GreedyLabError as exc:
        print(f"greedylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logger.info("command_finished", command=config.command.value, exit_code=output.exit_code)
    return output.exit_code


if __name__ == "__main__":
    sys.exit(main())
