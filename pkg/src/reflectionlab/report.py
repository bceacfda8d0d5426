"""Result documents: running a classification end to end, attaching class
labels, rendering tables (markdown, csv, json) and caching results on disk."""
from __future__ import annotations

import csv
import fcntl
import hashlib
import io
import json
import os
import re
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from . import classical
from .classify import ClassificationIncomplete, SubgroupClassRecord, full_classification
from .config import EngineConfig
from .engine import DEFAULT, OrbitIndex
from .gamma import (GammaReport, closure_separation_check, coxeter_element, gamma_map,
                    surjectivity_audit, witness_cache)
from .rootsys import UnsupportedType, build_root_system, coordinate_blocks, validate_type

SCHEMA_VERSION = "1"


class InvalidTypeDescriptor(ValueError):
    pass


@dataclass(frozen=True)
class GroupType:
    family: str
    rank: int
    m: Optional[int] = None

    @property
    def label(self) -> str:
        return f"I2:{self.m}" if self.family == "I" else f"{self.family}{self.rank}"

    @property
    def file_stem(self) -> str:
        return f"I2_{self.m}" if self.family == "I" else self.label


def parse_type(text: str) -> GroupType:
    """``<Family><rank>`` (e.g. ``B5``, ``e8``) or ``I2:<m>``."""
    t = text.strip().upper()
    m = re.fullmatch(r"I2?[:(]?(\d+)\)?", t) if t.startswith("I") else None
    if m:
        mm = int(m.group(1))
        if mm < 3:
            raise InvalidTypeDescriptor(f"I2:{mm} needs m >= 3")
        return GroupType("I", 2, mm)
    m = re.fullmatch(r"([A-H])(\d+)", t)
    if not m:
        raise InvalidTypeDescriptor(f"cannot parse type {text!r}; expected e.g. B5, E8, H4 or I2:12")
    fam, rank = m.group(1), int(m.group(2))
    try:
        validate_type(fam, rank)
    except UnsupportedType as exc:
        raise InvalidTypeDescriptor(str(exc)) from exc
    return GroupType(fam, rank)


# ---------------------------------------------------------------------------
# Class labels

_LABELS: Optional[dict] = None


def _label_table(gt: GroupType) -> dict:
    global _LABELS
    if _LABELS is None:
        raw = json.loads(resources.files("reflectionlab").joinpath("data/labels.json").read_text("utf-8"))
        _LABELS = {k: {tuple(r[:4]): r[4] for r in rows} for k, rows in raw.items()}
    return _LABELS.get(gt.label, {})


def class_labels(gt: GroupType, records: list[SubgroupClassRecord]) -> list[str]:
    """Names for the Coxeter classes of the records.

    Classical ambients get signed cycle types (partitions in type A), computed
    from the elements.  Exceptional and non-crystallographic ambients use
    the reference naming, looked up by closure class and subgroup class; a
    missing entry falls back to the fingerprint digest.
    """
    if gt.family == "A":
        return [str(classical.cycle_type_a(coxeter_element(r.subsystem))) for r in records]
    if gt.family in "BCD":
        return [str(classical.signed_cycle_type(coxeter_element(r.subsystem))) for r in records]
    table = _label_table(gt)
    out = []
    for r in records:
        head = records[r.closure_ref]
        key = (str(head.type_label), head.class_size, str(r.type_label), r.class_size)
        label = table.get(key)
        if label is None:
            label = "#" + (r.coxeter_class.digest if r.coxeter_class else "?")
        out.append(label)
    return out


def parameters(gt: GroupType, records: list[SubgroupClassRecord], labels: list[str]) -> list[Optional[str]]:
    """Partition parameters of B/C and D records (triple resp. double partitions)."""
    if gt.family not in "BCD":
        return [None] * len(records)
    out = []
    for r, lab in zip(records, labels):
        parts: dict[str, list[int]] = {"A": [], "B": [], "C": [], "D": []}
        for kind, size in coordinate_blocks(r.subsystem):
            parts[kind].append(size)
        l1 = classical.Partition(tuple(parts["A"]))
        l2 = classical.Partition(tuple(parts["B"] + parts["C"]))
        l3 = classical.Partition(tuple(parts["D"]))
        if gt.family == "D":
            if lab.endswith(("+", "-")) and not len(l3):
                out.append(f"{l1}.{lab[-1]}")
            else:
                out.append(str(classical.DoublePartition(l1, l3)))
        else:
            out.append(str(classical.TriplePartition(l1, l2, l3)))
    return out


# ---------------------------------------------------------------------------
# Documents

@dataclass
class RecordRow:
    type: str
    order: int
    class_size: int
    closure_block: int
    gamma_label: str
    gamma_class: int
    fingerprint: Optional[str]
    parameter: Optional[str] = None
    canonical: Optional[str] = None


@dataclass
class ResultDocument:
    schema_version: str
    group: dict
    records: list[RecordRow]
    reports: dict = field(default_factory=dict)
    warning: Optional[str] = None
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> ResultDocument:
        d = dict(d)
        d["records"] = [RecordRow(**r) for r in d["records"]]
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> ResultDocument:
        return cls.from_dict(json.loads(text))

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i, r in enumerate(self.records):
            out.setdefault(r.closure_block, []).append(i)
        return list(out.values())


def _group_dict(gt: GroupType, order: Optional[int]) -> dict:
    return {"family": gt.family, "rank": gt.rank, "m": gt.m, "label": gt.label, "order": order}


def _table_order(records: list[SubgroupClassRecord], labels: list[str]) -> list[int]:
    """Record positions for output.

    Closure blocks keep their classification order, except that blocks whose
    closures tie on rank, order, class size and type are put in order of
    their class labels (so the "+" member of a split pair comes first).
    """
    blocks: dict[int, list[int]] = {}
    for i, r in enumerate(records):
        blocks.setdefault(r.closure_ref, []).append(i)
    first: dict[tuple, int] = {}
    for pos, h in enumerate(blocks):
        r = records[h]
        first.setdefault((r.rank, r.subgroup_order, r.class_size, str(r.type_label)), pos)

    def key(h):
        r = records[h]
        return (first[(r.rank, r.subgroup_order, r.class_size, str(r.type_label))], labels[h])

    return [i for h in sorted(blocks, key=key) for i in blocks[h]]


def build_document(gt: GroupType, records: list[SubgroupClassRecord], report: Optional[GammaReport],
                   warning: Optional[str] = None, witnesses: Optional[dict] = None) -> ResultDocument:
    labels = class_labels(gt, records) if report is not None else ["?"] * len(records)
    params = parameters(gt, records, labels) if report is not None else [None] * len(records)
    order = _table_order(records, labels)
    pos = {old: new for new, old in enumerate(order)}
    gclass: dict[int, int] = {}
    if report is not None:
        for old in order:
            gclass.setdefault(report.class_of_record[old], len(gclass))
    rows = []
    for old in order:
        r = records[old]
        rows.append(RecordRow(
            type=str(r.type_label), order=r.subgroup_order, class_size=r.class_size,
            closure_block=pos[r.closure_ref],
            gamma_label=labels[old],
            gamma_class=gclass[report.class_of_record[old]] if report is not None else -1,
            fingerprint=r.coxeter_class.digest if r.coxeter_class else None,
            parameter=params[old], canonical=r.canonical.hex))
    reports = {}
    if report is not None:
        reports = {
            "injective": report.injective,
            "coincidence_pairs": [[pos[p.first], pos[p.second], list(p.word)] for p in report.coincidence_pairs],
            "reflection_classes": report.reflection_classes,
            "surjective": report.surjective,
            "class_count": report.class_count,
        }
    order_w = records[0].subsystem.ambient.type_label.order if records else None
    return ResultDocument(SCHEMA_VERSION, _group_dict(gt, order_w), rows, reports, warning, witnesses or {})


def dihedral_document(m: int) -> ResultDocument:
    """Result document for I2(m) from the divisor classification."""
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = classical.classify_i2(m)
    small = [r for r in res.records if r.order <= 2]
    full = [r for r in res.records if r.order > 2]
    full.sort(key=lambda r: (-r.order, r.label))
    rows = []
    for i, r in enumerate(small):
        rows.append(RecordRow(r.label, r.order, r.class_size, i, r.coxeter_class, 0, None))
    head = len(rows)
    for r in full:
        rows.append(RecordRow(r.label, r.order, r.class_size, head, r.coxeter_class, 0, None))
    classes: dict[str, int] = {}
    pairs = []
    for i, row in enumerate(rows):
        if row.gamma_label in classes:
            pairs.append([rows.index(next(x for x in rows if x.gamma_label == row.gamma_label)), i, []])
        row.gamma_class = classes.setdefault(row.gamma_label, len(classes))
    reports = {"injective": res.injective, "coincidence_pairs": pairs,
               "reflection_classes": 1 if m % 2 else 2, "surjective": res.surjective,
               "class_count": len(res.element_classes)}
    return ResultDocument(SCHEMA_VERSION, _group_dict(GroupType("I", 2, m), 2 * m), rows, reports)


# ---------------------------------------------------------------------------
# Running

@dataclass
class RunOptions:
    config: EngineConfig = DEFAULT
    check_surjective: bool = False
    cache_dir: Optional[Path] = None


class BudgetExhausted(RuntimeError):
    def __init__(self, document: ResultDocument, message: str):
        super().__init__(message)
        self.document = document


def run(gt: GroupType, opts: RunOptions = RunOptions()) -> ResultDocument:
    """Classify, compute gamma, optionally audit surjectivity; uses the cache
    when one is configured."""
    if gt.family == "I":
        return dihedral_document(gt.m)
    cache = Cache(opts.cache_dir) if opts.cache_dir else None
    if cache is not None:
        doc = cache.load(gt)
        if doc is not None and doc.warning is None and (not opts.check_surjective
                                                        or doc.reports.get("surjective") is not None):
            return doc
        witnesses = doc.witnesses if doc is not None else {}
    else:
        witnesses = {}
    doc = compute(gt, opts, witnesses)
    if cache is not None and doc.warning is None:
        cache.store(gt, doc)
    return doc


def compute(gt: GroupType, opts: RunOptions, witnesses: Optional[dict] = None) -> ResultDocument:
    from .engine import GroupTooLarge, SearchBudgetExceeded

    rs = build_root_system(gt.family, gt.rank)
    index = OrbitIndex(rs, budget=opts.config.orbit_budget)
    try:
        records = full_classification(rs, index)
    except ClassificationIncomplete as exc:
        doc = build_document(gt, exc.partial, None, warning=f"orbit budget exhausted: {exc.cause}")
        raise BudgetExhausted(doc, str(exc)) from exc
    try:
        report = gamma_map(records, budget=opts.config.search_budget, known_witnesses=witnesses)
    except SearchBudgetExceeded as exc:
        i, j = getattr(exc, "pair", (None, None))
        msg = f"conjugacy search budget exhausted for records {i} and {j}: {exc}"
        doc = build_document(gt, records, None, warning=msg)
        raise BudgetExhausted(doc, msg) from exc
    if opts.check_surjective:
        try:
            ok, classes = surjectivity_audit(records, rs, opts.config)
            report.surjective = ok
            report.class_count = len(classes.sizes)
        except GroupTooLarge:
            pass
    sep = closure_separation_check(records, report)
    if not sep.ok:
        raise AssertionError("; ".join(sep.counterexamples))
    return build_document(gt, records, report, witnesses=witness_cache(records, report))


# ---------------------------------------------------------------------------
# Rendering

def _md_escape(s) -> str:
    return str(s).replace("|", "\\|")


def render_markdown(doc: ResultDocument, group_by_closure: bool = True) -> str:
    with_param = any(r.parameter for r in doc.records)
    head = ["Type of R"] + (["λ"] if with_param else []) + ["\\|R\\|", "\\|[R]\\|", "Class"]
    align = [":--"] + ([":--"] if with_param else []) + ["--:", "--:", ":--"]
    lines = [f"## Reflection subgroups of W({doc.group['label']})", "",
             "| " + " | ".join(head) + " |", "| " + " | ".join(align) + " |"]
    prev = None
    for r in doc.records:
        if group_by_closure and prev is not None and r.closure_block != prev:
            lines.append("| " + " | ".join(["---"] * len(head)) + " |")
        prev = r.closure_block
        cells = [r.type] + ([r.parameter or ""] if with_param else []) + [r.order, r.class_size, r.gamma_label]
        lines.append("| " + " | ".join(_md_escape(c) for c in cells) + " |")
    if doc.warning:
        lines += ["", f"warning: {doc.warning}"]
    return "\n".join(lines) + "\n"


def _flag(v: Optional[bool]) -> str:
    return "unknown" if v is None else str(v).lower()


def render_gamma(doc: ResultDocument, find_coincidences: bool = True, show_surjective: bool = True) -> str:
    rep = doc.reports
    lines = [f"group: {doc.group['label']}",
             f"records: {len(doc.records)}",
             f"injective: {_flag(rep.get('injective'))}",
             f"reflection classes: {rep.get('reflection_classes', 'unknown')}"]
    if show_surjective and rep.get("surjective") is not None:
        lines.append(f"surjective: {_flag(rep['surjective'])}")
        lines.append(f"conjugacy classes of W: {rep.get('class_count')}")
    if find_coincidences:
        pairs = rep.get("coincidence_pairs", [])
        lines.append(f"coincidence pairs: {len(pairs)}")
        for i, j, word in pairs:
            a, b = doc.records[i], doc.records[j]
            lines.append(f"  {a.type} (class size {a.class_size}) ~ {b.type} (class size {b.class_size})"
                         f"  class {a.gamma_label}  witness length {len(word)}")
            if word:
                lines.append(f"    witness: {' '.join(str(g + 1) for g in word)}")
    if doc.warning:
        lines.append(f"warning: {doc.warning}")
    return "\n".join(lines) + "\n"


def render_csv(doc: ResultDocument) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["type", "parameter", "order", "class_size", "closure_block", "class", "gamma_class", "fingerprint"])
    for r in doc.records:
        w.writerow([r.type, r.parameter or "", r.order, r.class_size, r.closure_block, r.gamma_label,
                    r.gamma_class, r.fingerprint or ""])
    return buf.getvalue()


def render(doc: ResultDocument, fmt: str, group_by_closure: bool = True) -> str:
    if fmt == "md":
        return render_markdown(doc, group_by_closure)
    if fmt == "csv":
        return render_csv(doc)
    if fmt == "json":
        return doc.to_json()
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# Cache

class Cache:
    """One JSON document per group type, guarded by an advisory lock."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def path(self, gt: GroupType) -> Path:
        return self.root / f"v{SCHEMA_VERSION}-{gt.file_stem}.json"

    @contextmanager
    def _locked(self, exclusive: bool):
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.root / ".lock", "a+") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX if exclusive else fcntl.LOCK_SH)
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def load(self, gt: GroupType) -> Optional[ResultDocument]:
        p = self.path(gt)
        if not p.exists():
            return None
        with self._locked(False):
            try:
                doc = ResultDocument.from_json(p.read_text("utf-8"))
            except (ValueError, TypeError, KeyError):
                return None
        return doc if doc.schema_version == SCHEMA_VERSION else None

    def store(self, gt: GroupType, doc: ResultDocument) -> None:
        with self._locked(True):
            tmp = self.path(gt).with_suffix(".tmp")
            tmp.write_text(doc.to_json(), "utf-8")
            os.replace(tmp, self.path(gt))

    def entries(self) -> list[Path]:
        return sorted(self.root.glob(f"v{SCHEMA_VERSION}-*.json")) if self.root.exists() else []

    def clear(self) -> int:
        with self._locked(True):
            files = self.entries()
            for p in files:
                p.unlink()
        return len(files)


def document_digest(doc: ResultDocument) -> str:
    return hashlib.sha256(doc.to_json().encode()).hexdigest()
