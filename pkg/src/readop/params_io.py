"""Versioned text parameter files.

Only the free choices (a, b, s, D) are authoritative; every derived field is
written for the reader and re-checked on load, so a hand-edited file with
inconsistent positions is rejected instead of silently reinterpreted.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError
from .operator import STRICT, TOY, OperatorModel, StageSpec
from .scalar import Scalar
from .stages import CONDITION_IDS, ConditionCheck, ConditionReport, check_conditions
from .weights import WeightConfig

PARAMS_MAGIC = "# readop-params v1"
_DERIVED = ("level", "delta", "delta_next", "eps", "pos_delta", "pos_a", "pos_delta_next", "pos_b", "pos_s")


@dataclass
class ParameterFile:
    model: OperatorModel
    reports: dict[int, ConditionReport] = field(default_factory=dict)
    sampler_seed: int = 1729

    def report_for(self, n: int) -> ConditionReport:
        rep = self.reports.get(n)
        if rep is None:
            rep = check_conditions(self.model, n)
            self.reports[n] = rep
        return rep


def _fmt(v) -> str:
    return "-" if v is None else str(v)


def dumps(pf: ParameterFile) -> str:
    m = pf.model
    out = [
        PARAMS_MAGIC,
        f"mode = {m.mode}",
        f"growth = {m.weights.growth}",
        f"sampler_seed = {pf.sampler_seed}",
        f"stages = {len(m.stages)}",
    ]
    for st in m.stages:
        out += ["", f"[stage {st.n}]"]
        out += [f"a = {st.a}", f"b = {_fmt(st.b)}", f"s = {_fmt(st.s)}", f"D = {st.D}"]
        out.append(f"d_samples = {st.d_samples}")
        out.append("empirical_D = yes")
        for key in _DERIVED:
            out.append(f"{key} = {_fmt(getattr(st, key))}")
        rep = pf.report_for(st.n)
        for c in rep.checks:
            fields = [c.status, c.lhs, c.rhs, c.checked, c.note]
            out.append(f"check.{c.cid} = " + " | ".join(fields))
    return "\n".join(out) + "\n"


def _int_or_none(text: str, where: str) -> int | None:
    if text == "-":
        return None
    try:
        return int(text)
    except ValueError as exc:
        raise FormatError(f"{where}: expected an integer, got {text!r}") from exc


def loads(text: str) -> ParameterFile:
    lines = text.splitlines()
    if not lines or lines[0].strip() != PARAMS_MAGIC:
        raise FormatError(f"missing header {PARAMS_MAGIC!r}")
    head: dict[str, str] = {}
    stages: list[dict[str, str]] = []
    current = head
    for no, raw in enumerate(lines[1:], 2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[stage ") and line.endswith("]"):
            n = _int_or_none(line[7:-1], f"line {no}")
            if n != len(stages):
                raise FormatError(f"line {no}: stage {n} out of order")
            current = {}
            stages.append(current)
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"line {no}: expected 'key = value', got {raw!r}")
        key, value = key.strip(), value.strip()
        if key in current:
            raise FormatError(f"line {no}: duplicate key {key!r}")
        current[key] = value
    try:
        mode = head["mode"]
        growth = int(head["growth"])
        seed = int(head.get("sampler_seed", "1729"))
        count = int(head["stages"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad file header: {exc}") from exc
    if mode not in (STRICT, TOY):
        raise FormatError(f"unknown mode {mode!r}")
    if count != len(stages):
        raise FormatError(f"header announces {count} stages, file has {len(stages)}")
    specs = []
    for n, sec in enumerate(stages):
        try:
            specs.append(
                StageSpec(
                    a=int(sec["a"]),
                    D=Scalar.parse(sec["D"]),
                    b=_int_or_none(sec.get("b", "-"), f"stage {n} b"),
                    s=_int_or_none(sec.get("s", "-"), f"stage {n} s"),
                    d_samples=int(sec.get("d_samples", "0")),
                )
            )
        except (KeyError, ValueError) as exc:
            raise FormatError(f"stage {n}: {exc}") from exc
    try:
        model = OperatorModel.from_specs(specs, mode, WeightConfig(growth))
    except ValueError as exc:
        raise FormatError(f"inconsistent parameters: {exc}") from exc
    reports = {}
    for st, sec in zip(model.stages, stages):
        for key in _DERIVED:
            if key in sec and sec[key] != _fmt(getattr(st, key)):
                raise FormatError(
                    f"stage {st.n}: {key} = {sec[key]} does not match the recomputed {getattr(st, key)}"
                )
        checks = []
        for cid in CONDITION_IDS:
            raw = sec.get(f"check.{cid}")
            if raw is None:
                break
            parts = [p.strip() for p in raw.split("|", 4)]
            if len(parts) != 5:
                raise FormatError(f"stage {st.n}: malformed check.{cid}")
            checks.append(ConditionCheck(cid, *parts))
        else:
            reports[st.n] = ConditionReport(st.n, tuple(checks))
    return ParameterFile(model, reports, seed)


def save(pf: ParameterFile, path: str | Path) -> str:
    text = dumps(pf)
    Path(path).write_text(text, encoding="utf-8")
    return text


def load(path: str | Path) -> ParameterFile:
    return loads(Path(path).read_text(encoding="utf-8"))


def file_hash(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def text_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
