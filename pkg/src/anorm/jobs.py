"""Job-file DSL: parsing into a resolved :class:`JobFile` and running its tasks.

Statements (one per line or brace block, ``#`` starts a comment)::

    variety <name> { vars: x, y; ideal: <poly>, <poly>; dim: <int>; }
    function <name> on <variety> = (<poly>) / (<poly>)
    generators <name> on <variety> = [ <function-or-poly>, ... ]
    task denominator <variety> [seed=<int>]
    task represent <function> using <variety>
    task normalize <variety> with <generators>
    task nullsatz on <variety> with <generators> : g=<function> ; members=[<function>,...]
    task growth <function> { rmin=<float>; rmax=<float>; decades=<int>; samples=<int>; seed=<int>; }
    task check prop52 <function> with <generators>

Every name must be declared before it is referenced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .anormalizer import ANormalisation, graph_ideal
from .denominator import CAlgFunction, check_denominator, represent, universal_denominator
from .exceptions import AnormError, ComputationLimit, InputError, NumericError, ParseError, VerificationError
from .expr_io import Report, dumps, parse_poly, print_canonical
from .groebner import limits
from .growth import GrowthConfig, check_prop52, estimate_growth
from .nullsatz import certificate
from .variety import VarietyModel

__all__ = ["JobFile", "Task", "RunConfig", "parse_job", "load_job", "run_tasks", "exit_code_for"]

_IDENT = r"[A-Za-z_][A-Za-z_0-9]*"
_KEYWORDS = ("variety", "function", "generators", "task")
TASK_KINDS = ("denominator", "represent", "normalize", "nullsatz", "growth", "check")

STATUS_EXIT = {"ok": 0, "fail": 1, "error": 2, "limit": 3, "numeric": 4}


@dataclass
class Task:
    kind: str
    args: dict
    line: int
    index: int

    @property
    def task_id(self) -> str:
        return f"{self.index}:{self.kind}"


@dataclass
class JobFile:
    varieties: Dict[str, VarietyModel] = field(default_factory=dict)
    functions: Dict[str, CAlgFunction] = field(default_factory=dict)
    generators: Dict[str, Tuple[str, List[CAlgFunction]]] = field(default_factory=dict)
    tasks: List[Task] = field(default_factory=list)
    path: Optional[Path] = None


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every task of a run."""

    seed: int = 0
    max_pairs: int = 50_000
    max_bits: int = 10**6
    tol: float = 1e-6
    task_filter: Optional[str] = None
    write_certs: bool = False
    out_dir: Optional[Path] = None

    def __post_init__(self):
        if self.max_pairs <= 0 or self.max_bits <= 0:
            raise InputError("caps must be positive")
        if not self.tol > 0:
            raise InputError("tolerance must be positive")


# ---------------------------------------------------------------- parsing


class _Source:
    def __init__(self, text: str):
        # blank out comments so offsets stay valid
        self.text = re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)

    def where(self, offset: int) -> Tuple[int, int]:
        before = self.text[:offset]
        line = before.count("\n") + 1
        return line, offset - (before.rfind("\n") + 1) + 1

    def error(self, msg: str, offset: int) -> ParseError:
        return ParseError(msg, *self.where(offset))


def _statements(src: _Source):
    """Split into (start, end) spans, each beginning with a keyword at bracket depth 0."""
    spans = []
    depth = 0
    start = None
    pos = 0
    for raw in src.text.splitlines(keepends=True):
        stripped = raw.lstrip()
        lead = pos + len(raw) - len(stripped)
        word = re.match(_IDENT, stripped)
        if stripped.strip() and depth == 0 and word and word.group(0) in _KEYWORDS:
            if start is not None:
                spans.append((start, lead))
            start = lead
        elif stripped.strip() and start is None:
            raise src.error("expected a declaration or task", lead)
        for ch in raw:
            if ch in "{[(":
                depth += 1
            elif ch in "}])":
                depth -= 1
                if depth < 0:
                    raise src.error(f"unbalanced {ch!r}", pos + raw.index(ch))
        pos += len(raw)
    if depth != 0:
        raise src.error("unclosed bracket at end of file", len(src.text))
    if start is not None:
        spans.append((start, len(src.text)))
    return spans


def _split_top(text: str, base: int, sep: str):
    """Split on ``sep`` outside brackets, yielding (piece, absolute offset)."""
    out, depth, last = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "{[(":
            depth += 1
        elif ch in "}])":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append((text[last:i], base + last))
            last = i + 1
    out.append((text[last:], base + last))
    return out


def _trim(piece: str, offset: int):
    lead = len(piece) - len(piece.lstrip())
    return piece.strip(), offset + lead


class _JobParser:
    def __init__(self, text: str):
        self.src = _Source(text)
        self.job = JobFile()
        self.kinds: Dict[str, Tuple[str, int]] = {}

    def parse(self) -> JobFile:
        for start, end in _statements(self.src):
            body = self.src.text[start:end].rstrip()
            keyword = re.match(_IDENT, body).group(0)
            getattr(self, f"_{keyword}")(body, start)
        return self.job

    # helpers

    def _err(self, msg, offset):
        return self.src.error(msg, offset)

    def _declare(self, name, kind, offset):
        if name in self.kinds:
            first = self.kinds[name][1]
            raise self._err(f"duplicate name {name!r} (first declared on line {first})", offset)
        self.kinds[name] = (kind, self.src.where(offset)[0])

    def _lookup(self, name, kind, offset):
        found = self.kinds.get(name)
        if found is None:
            raise self._err(f"undeclared {kind} {name!r}", offset)
        if found[0] != kind:
            raise self._err(f"{name!r} is a {found[0]}, not a {kind}", offset)
        table = {"variety": self.job.varieties, "function": self.job.functions, "generators": self.job.generators}
        return table[kind][name]

    def _poly(self, text, offset, ring):
        text, offset = _trim(text, offset)
        if not text:
            raise self._err("empty polynomial", offset)
        return parse_poly(text, ring, origin=self.src.where(offset))

    def _rational(self, text, offset, A: VarietyModel, name=None) -> CAlgFunction:
        """``(num) / (den)``, a bare polynomial, or a declared function name."""
        text, offset = _trim(text, offset)
        if re.fullmatch(_IDENT, text) and text in self.kinds and text not in A.ring:
            f = self._lookup(text, "function", offset)
            if f.variety is not A:
                raise self._err(f"function {text!r} is not defined on {A.name}", offset)
            return f
        depth = 0
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0 and text[:i].rstrip().endswith(")") and text[i + 1:].lstrip().startswith("("):
                num = self._poly(text[:i], offset, A.ring)
                den = self._poly(text[i + 1:], offset + i + 1, A.ring)
                if den.is_zero():
                    raise self._err("denominator is the zero polynomial", offset + i + 1)
                return CAlgFunction(A, num, den, name=name, validate=False)
        return CAlgFunction(A, self._poly(text, offset, A.ring), 1, name=name, validate=False)

    def _match(self, pattern, body, start, what):
        m = re.fullmatch(pattern, body, re.S)
        if m is None:
            raise self._err(f"malformed {what}", start)
        return m

    # statements

    def _variety(self, body, start):
        m = self._match(rf"variety\s+({_IDENT})\s*\{{(.*)\}}\s*", body, start, "variety declaration")
        name = m.group(1)
        self._declare(name, "variety", start + m.start(1))
        fields = {}
        for piece, off in _split_top(m.group(2), start + m.start(2), ";"):
            piece, off = _trim(piece, off)
            if not piece:
                continue
            fm = re.fullmatch(rf"({_IDENT})\s*:(.*)", piece, re.S)
            if fm is None or fm.group(1) not in ("vars", "ideal", "dim"):
                raise self._err(f"unknown field in variety {name!r}", off)
            if fm.group(1) in fields:
                raise self._err(f"field {fm.group(1)!r} given twice", off)
            fields[fm.group(1)] = (fm.group(2), off + fm.start(2))
        if "vars" not in fields:
            raise self._err(f"variety {name!r}: vars field missing", start)
        if "dim" not in fields:
            raise self._err(f"variety {name!r}: dimension field missing", start)
        ring = []
        for piece, off in _split_top(*fields["vars"], ","):
            v, off = _trim(piece, off)
            if not re.fullmatch(_IDENT, v):
                raise self._err(f"bad variable name {v!r}", off)
            if v in ring:
                raise self._err(f"duplicate variable {v!r}", off)
            ring.append(v)
        polys = []
        if "ideal" in fields:
            for piece, off in _split_top(*fields["ideal"], ","):
                if piece.strip():
                    polys.append(self._poly(piece, off, ring))
        dim_text, dim_off = _trim(*fields["dim"])
        if not re.fullmatch(r"\d+", dim_text):
            raise self._err("dim must be a non-negative integer", dim_off)
        dim = int(dim_text)
        if dim > len(ring):
            raise self._err(f"dim {dim} exceeds the number of variables", dim_off)
        self.job.varieties[name] = VarietyModel(ring, polys, dim, name=name, validate=False)

    def _function(self, body, start):
        m = self._match(rf"function\s+({_IDENT})\s+on\s+({_IDENT})\s*=(.*)", body, start, "function declaration")
        A = self._lookup(m.group(2), "variety", start + m.start(2))
        self._declare(m.group(1), "function", start + m.start(1))
        f = self._rational(m.group(3), start + m.start(3), A, name=m.group(1))
        self.job.functions[m.group(1)] = f

    def _generators(self, body, start):
        m = self._match(rf"generators\s+({_IDENT})\s+on\s+({_IDENT})\s*=\s*\[(.*)\]\s*", body, start,
                        "generators declaration")
        A = self._lookup(m.group(2), "variety", start + m.start(2))
        self._declare(m.group(1), "generators", start + m.start(1))
        items = [self._rational(p, off, A) for p, off in _split_top(m.group(3), start + m.start(3), ",") if p.strip()]
        self.job.generators[m.group(1)] = (m.group(2), items)

    def _task(self, body, start):
        m = self._match(rf"task\s+({_IDENT})\s*(.*)", body, start, "task")
        kind = m.group(1)
        if kind not in TASK_KINDS:
            raise self._err(f"unknown task kind {kind!r}", start + m.start(1))
        rest, off = m.group(2).rstrip(), start + m.start(2)
        args = getattr(self, f"_task_{kind}")(rest, off)
        self.job.tasks.append(Task(kind, args, self.src.where(start)[0], len(self.job.tasks) + 1))

    def _task_denominator(self, rest, off):
        m = self._match(rf"({_IDENT})(?:\s+seed\s*=\s*(-?\d+))?", rest, off, "denominator task")
        self._lookup(m.group(1), "variety", off + m.start(1))
        return {"variety": m.group(1), "seed": int(m.group(2)) if m.group(2) else None}

    def _task_represent(self, rest, off):
        m = self._match(rf"({_IDENT})\s+using\s+({_IDENT})", rest, off, "represent task")
        f = self._lookup(m.group(1), "function", off + m.start(1))
        A = self._lookup(m.group(2), "variety", off + m.start(2))
        if f.variety is not A:
            raise self._err(f"function {m.group(1)!r} is not defined on {m.group(2)}", off + m.start(1))
        return {"function": m.group(1), "variety": m.group(2)}

    def _task_normalize(self, rest, off):
        m = self._match(rf"({_IDENT})\s+with\s+({_IDENT})", rest, off, "normalize task")
        self._lookup(m.group(1), "variety", off + m.start(1))
        on, _ = self._lookup(m.group(2), "generators", off + m.start(2))
        if on != m.group(1):
            raise self._err(f"generators {m.group(2)!r} are declared on {on}, not {m.group(1)}", off + m.start(2))
        return {"variety": m.group(1), "generators": m.group(2)}

    def _task_nullsatz(self, rest, off):
        m = self._match(rf"on\s+({_IDENT})\s+with\s+({_IDENT})\s*:\s*g\s*=(.*?);\s*members\s*=\s*\[(.*)\]",
                        rest, off, "nullsatz task")
        A = self._lookup(m.group(1), "variety", off + m.start(1))
        on, _ = self._lookup(m.group(2), "generators", off + m.start(2))
        if on != m.group(1):
            raise self._err(f"generators {m.group(2)!r} are declared on {on}, not {m.group(1)}", off + m.start(2))
        g = self._rational(m.group(3), off + m.start(3), A)
        members = [self._rational(p, o, A) for p, o in _split_top(m.group(4), off + m.start(4), ",") if p.strip()]
        if not members:
            raise self._err("members list is empty", off + m.start(4))
        return {"variety": m.group(1), "generators": m.group(2), "g": g, "members": members}

    def _task_growth(self, rest, off):
        m = self._match(rf"({_IDENT})\s*(?:\{{(.*)\}})?", rest, off, "growth task")
        self._lookup(m.group(1), "function", off + m.start(1))
        params = {}
        casts = {"rmin": float, "rmax": float, "decades": int, "samples": int, "seed": int}
        if m.group(2) is not None:
            for piece, o in _split_top(m.group(2), off + m.start(2), ";"):
                piece, o = _trim(piece, o)
                if not piece:
                    continue
                pm = re.fullmatch(rf"({_IDENT})\s*=\s*(\S+)", piece)
                if pm is None or pm.group(1) not in casts:
                    raise self._err(f"unknown growth parameter in {piece!r}", o)
                try:
                    params[pm.group(1)] = casts[pm.group(1)](pm.group(2))
                except ValueError:
                    raise self._err(f"bad value for {pm.group(1)}", o) from None
        return {"function": m.group(1), "params": params}

    def _task_check(self, rest, off):
        m = self._match(rf"prop52\s+({_IDENT})\s+with\s+({_IDENT})", rest, off, "check task")
        f = self._lookup(m.group(1), "function", off + m.start(1))
        on, _ = self._lookup(m.group(2), "generators", off + m.start(2))
        if self.job.varieties[on] is not f.variety:
            raise self._err(f"generators {m.group(2)!r} and function {m.group(1)!r} live on different sets",
                            off + m.start(2))
        return {"check": "prop52", "function": m.group(1), "generators": m.group(2)}


def parse_job(text: str) -> JobFile:
    """Parse and resolve a job file; raises :class:`ParseError` with line and column."""
    return _JobParser(text).parse()


def load_job(path) -> JobFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    job = parse_job(text)
    job.path = path
    return job


# ---------------------------------------------------------------- running


class _Session:
    """Per-run caches so later tasks reuse earlier results."""

    def __init__(self, job: JobFile, cfg: RunConfig):
        self.job = job
        self.cfg = cfg
        self.validated = set()
        self.normalisations: Dict[str, ANormalisation] = {}

    def variety(self, name) -> VarietyModel:
        A = self.job.varieties[name]
        if name not in self.validated:
            A.validate()
            self.validated.add(name)
        return A

    def function(self, f: CAlgFunction) -> CAlgFunction:
        self.variety(f.variety.name)
        return f.validate()

    def normalisation(self, gname) -> ANormalisation:
        N = self.normalisations.get(gname)
        if N is None:
            on, gens = self.job.generators[gname]
            A = self.variety(on)
            N = graph_ideal(A, [self.function(h) for h in gens])
            self.normalisations[gname] = N
        return N

    def growth_config(self, params) -> GrowthConfig:
        base = {"seed": self.cfg.seed, "tol": self.cfg.tol}
        base.update(params)
        return GrowthConfig(**base)

    # task bodies

    def denominator(self, task):
        A = self.variety(task.args["variety"])
        seed = task.args["seed"] if task.args["seed"] is not None else self.cfg.seed
        D = universal_denominator(A, seed=seed)
        return check_denominator(D, [], task.task_id)

    def represent(self, task):
        f = self.function(self.job.functions[task.args["function"]])
        A = f.variety
        D = universal_denominator(A, seed=self.cfg.seed)
        R = represent(f, D)
        payload = {"function": f.label(), "Q": print_canonical(D.Q), "R": print_canonical(R), "verified": True}
        return Report(task.task_id, "represent", "ok", payload)

    def normalize(self, task):
        N = self.normalisation(task.args["generators"])
        payload = N.to_dict()
        payload["variety"] = task.args["variety"]
        payload["dim"] = N.variety.dimension()
        payload["projection_verified"] = True
        return Report(task.task_id, "normalize", "ok", payload)

    def nullsatz(self, task):
        N = self.normalisation(task.args["generators"])
        g = self.function(task.args["g"])
        fs = [self.function(f) for f in task.args["members"]]
        C = certificate(g, fs, N)
        payload = {"g": g.label(), "members": [f.label() for f in fs]}
        payload.update(C.to_dict())
        report = Report(task.task_id, "nullsatz", "ok", payload)
        if self.cfg.write_certs:
            report.diagnostics.append(f"certificate written to {self._write_cert(task, payload)}")
        return report

    def growth(self, task):
        f = self.function(self.job.functions[task.args["function"]])
        est = estimate_growth(f, f.variety, self.growth_config(task.args["params"]))
        payload = {"function": f.label()}
        payload.update(est.to_dict())
        report = Report(task.task_id, "growth", "ok", payload)
        if est.snapped is None:
            report.diagnostics.append("slope did not snap to a small rational")
        return report

    def check(self, task):
        f = self.function(self.job.functions[task.args["function"]])
        N = self.normalisation(task.args["generators"])
        return check_prop52(f, N, self.growth_config({}), task.task_id)

    def _write_cert(self, task, payload) -> Path:
        folder = self.cfg.out_dir or (self.job.path.parent if self.job.path else Path.cwd())
        stem = self.job.path.stem if self.job.path else "job"
        target = Path(folder) / f"{stem}.task{task.index}.cert.json"
        target.write_text(dumps(payload) + "\n", encoding="utf-8")
        return target


def _failure(task, status, exc) -> Report:
    payload = {"error": str(exc)}
    if isinstance(exc, VerificationError):
        payload["stage"] = exc.stage
        if exc.residual is not None:
            payload["residual"] = print_canonical(exc.residual)
    return Report(task.task_id, task.kind, status, payload, [str(exc)])


def run_tasks(job: JobFile, cfg: RunConfig = RunConfig(), kinds=None) -> List[Report]:
    """Run the job's tasks in order (optionally only ``kinds``), one report per task."""
    session = _Session(job, cfg)
    wanted = set(kinds) if kinds else None
    if cfg.task_filter:
        wanted = (wanted or set(TASK_KINDS)) & {cfg.task_filter}
    reports = []
    with limits(max_pairs=cfg.max_pairs, max_bits=cfg.max_bits):
        for task in job.tasks:
            if wanted is not None and task.kind not in wanted:
                continue
            try:
                reports.append(getattr(session, task.kind)(task))
            except InputError as exc:
                reports.append(_failure(task, "error", exc))
            except ComputationLimit as exc:
                reports.append(_failure(task, "limit", exc))
            except NumericError as exc:
                reports.append(_failure(task, "numeric", exc))
            except VerificationError as exc:
                reports.append(_failure(task, "fail", exc))
    return reports


def exit_code_for(reports: List[Report]) -> int:
    """0 when everything passed, else the code of the first non-ok report."""
    for r in reports:
        if r.status != "ok":
            return STATUS_EXIT.get(r.status, 1)
    return 0


def with_overrides(cfg: RunConfig, **changes) -> RunConfig:
    return replace(cfg, **{k: v for k, v in changes.items() if v is not None})
