"""Shape-parameterised query families and a small latency harness.

Queries are built from an OPT-tree *skeleton* (nested ``(left, right)``
tuples, ``None`` for a leaf). The leftmost leaf becomes the mandatory part
(two triples and a FILTER); every other leaf is an AF-pattern hanging off
the shared variable ``?x`` with fresh variables of its own, which keeps the
query well-designed whatever the shape.

Zigzag trees are path-shaped: every OPT node has at most one OPT child,
and a step string over ``L``/``R`` says which side it is on.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import json
import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .algebra import (
    And,
    Bound,
    Filter,
    Iri,
    Literal,
    Opt,
    Pattern,
    Triple,
    Var,
    number_opts,
    opt_count,
)
from .errors import ShapeInfeasible
from .semantics import Graph, evaluate
from .wdtree import k_approximate

RDF_TYPE = Iri("rdf:type")


class Shape(enum.Enum):
    ZIGZAG = "zigzag"
    LEFT_DEEP = "left-deep"
    RIGHT_DEEP = "right-deep"
    FULL = "full"


@dataclass(frozen=True)
class TreeShape:
    kind: Shape
    opt_count: int
    # zigzag only: one L/R step per OPT node below the root
    steps: str | None = None


# ---------------------------------------------------------------------------
# Skeletons
# ---------------------------------------------------------------------------


def alternating_steps(n: int) -> str:
    """Strict left/right alternation starting with a right extension."""
    return "".join("RL"[i % 2] for i in range(max(n - 1, 0)))


def skeleton(shape: TreeShape):
    n = shape.opt_count
    if n < 0:
        raise ShapeInfeasible("OPT count must be non-negative")
    if shape.kind is Shape.LEFT_DEEP:
        t = None
        for _ in range(n):
            t = (t, None)
        return t
    if shape.kind is Shape.RIGHT_DEEP:
        t = None
        for _ in range(n):
            t = (None, t)
        return t
    if shape.kind is Shape.FULL:
        height = (n + 1).bit_length() - 1
        if (1 << height) - 1 != n:
            raise ShapeInfeasible(f"a full tree cannot have {n} OPT nodes")

        def full(h):
            return None if h == 0 else (full(h - 1), full(h - 1))

        return full(height)
    steps = shape.steps if shape.steps is not None else alternating_steps(n)
    if n == 0:
        if steps:
            raise ShapeInfeasible("steps given for an OPT-free query")
        return None
    if len(steps) != n - 1 or set(steps) - {"L", "R"}:
        raise ShapeInfeasible(f"zigzag with {n} OPT nodes needs {n - 1} L/R steps")
    t = (None, None)
    for s in reversed(steps):
        t = (t, None) if s == "L" else (None, t)
    return t


def skeleton_profile(t, k_max: int) -> list[int]:
    """OPT count of each k-approximation, computed on the bare skeleton."""

    def count(node, k):
        if k == 0:
            return 0
        total = 0
        while node is not None:
            total += 1 + count(node[1], k - 1)
            node = node[0]
        return total

    return [count(t, k) for k in range(k_max + 1)]


def find_zigzag(n: int, target: list[int] | tuple[int, ...]) -> list[str]:
    """Step strings of every path-shaped n-OPT tree with the given profile."""
    target = list(target)
    hits = []
    for steps in itertools.product("LR", repeat=max(n - 1, 0)):
        s = "".join(steps)
        t = skeleton(TreeShape(Shape.ZIGZAG, n, s))
        if skeleton_profile(t, len(target) - 1) == target:
            hits.append(s)
    return hits


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------

X = Var("x")


def _leaf_templates():
    """Factories ``i -> AF-pattern`` over ?x and leaf-local variables."""

    def simple(pred):
        return lambda i: Triple(X, Iri(pred), Var(f"v{i}"))

    def teaches(i):
        c = Var(f"c{i}")
        return And(Triple(X, Iri("teachOf"), c), Triple(c, Iri("name"), Var(f"v{i}")))

    def advisee(i):
        s = Var(f"s{i}")
        return Filter(And(Triple(s, Iri("advisor"), X), Triple(s, RDF_TYPE, Var(f"v{i}"))),
                      Bound(s))

    def author(i):
        return Triple(Var(f"v{i}"), Iri("publicationAuthor"), X)

    preds = ["name", "emailAddress", "telephone", "degreeFrom", "researchInterest",
             "title", "officeNumber", "age", "headOf", "doctoralDegreeFrom",
             "mastersDegreeFrom", "undergraduateDegreeFrom", "homepage"]
    return [simple(p) for p in preds] + [teaches, advisee, author]


def mandatory_part() -> Pattern:
    d = Var("d")
    return Filter(And(Triple(X, RDF_TYPE, Iri("professor")), Triple(X, Iri("workFor"), d)),
                  Bound(d))


def generate_query(shape: TreeShape, seed: int = 0) -> Pattern:
    """Well-designed ONF query whose tree has the requested shape."""
    t = skeleton(shape)
    templates = _leaf_templates()
    random.Random(seed).shuffle(templates)
    counter = itertools.count()

    def build(node, leftmost):
        if node is None:
            if leftmost:
                return mandatory_part()
            i = next(counter) + 1
            return templates[(i - 1) % len(templates)](i)
        left = build(node[0], leftmost)
        return Opt(left, build(node[1], False))

    return number_opts(build(t, True))


def opt_count_profile(p: Pattern, k_max: int) -> list[tuple[int, int]]:
    return [(k, opt_count(k_approximate(p, k))) for k in range(k_max + 1)]


ZIGZAG_PROFILE = (0, 2, 5, 8, 9)


def benchmark_queries(seed: int = 0) -> dict[str, Pattern]:
    """Q1 zigzag/9, Q2 left-deep/4, Q3 right-deep/4, Q4 full/15.

    Q1's zigzag tree is picked among path-shaped trees matching
    ``ZIGZAG_PROFILE``; if none matched it would fall back to strict
    alternation.
    """
    hits = find_zigzag(9, ZIGZAG_PROFILE)
    steps = hits[0] if hits else None
    return {
        "Q1": generate_query(TreeShape(Shape.ZIGZAG, 9, steps), seed),
        "Q2": generate_query(TreeShape(Shape.LEFT_DEEP, 4), seed),
        "Q3": generate_query(TreeShape(Shape.RIGHT_DEEP, 4), seed),
        "Q4": generate_query(TreeShape(Shape.FULL, 15), seed),
    }


# ---------------------------------------------------------------------------
# Synthetic university data
# ---------------------------------------------------------------------------


def generate_graph(universities: int, seed: int = 0) -> Graph:
    """Deterministic LUBM-flavoured graph; size grows linearly with ``universities``."""
    if universities < 1:
        raise ValueError("need at least one university")
    rng = random.Random(seed)
    triples = []

    def add(s, p, o):
        triples.append((s, Iri(p) if isinstance(p, str) else p, o))

    for u in range(universities):
        univ = Iri(f"Univ{u}")
        add(univ, RDF_TYPE, Iri("university"))
        for d in range(3):
            dept = Iri(f"Dept{d}.Univ{u}")
            add(dept, RDF_TYPE, Iri("department"))
            add(dept, "subOrganizationOf", univ)
            courses = [Iri(f"Course{c}.Dept{d}.Univ{u}") for c in range(8)]
            for c, course in enumerate(courses):
                add(course, RDF_TYPE, Iri("course"))
                add(course, "name", Literal(f"Course {c} of {dept.value}"))
            profs = [Iri(f"Prof{i}.Dept{d}.Univ{u}") for i in range(6)]
            for i, prof in enumerate(profs):
                add(prof, RDF_TYPE, Iri("professor"))
                add(prof, "workFor", dept)
                add(prof, "name", Literal(f"Professor {i}"))
                add(prof, "emailAddress", Literal(f"prof{i}@dept{d}.univ{u}.edu"))
                if i == 0:
                    add(prof, "headOf", dept)
                for pred, prob in (("telephone", 0.8), ("title", 0.5),
                                   ("officeNumber", 0.7), ("age", 0.6),
                                   ("homepage", 0.5)):
                    if rng.random() < prob:
                        add(prof, pred, Literal(f"{pred}-{i}-{d}-{u}"))
                for pred, prob in (("degreeFrom", 0.9), ("doctoralDegreeFrom", 0.7),
                                   ("mastersDegreeFrom", 0.6),
                                   ("undergraduateDegreeFrom", 0.6)):
                    if rng.random() < prob:
                        add(prof, pred, Iri(f"Univ{rng.randrange(max(universities, 3))}"))
                for r in range(rng.randint(1, 2)):
                    add(prof, "researchInterest", Literal(f"Research{rng.randrange(20)}"))
                for course in rng.sample(courses, rng.randint(1, 2)):
                    add(prof, "teachOf", course)
                for j in range(rng.randint(0, 3)):
                    pub = Iri(f"Pub{j}.Prof{i}.Dept{d}.Univ{u}")
                    add(pub, "publicationAuthor", prof)
            for s in range(20):
                student = Iri(f"Student{s}.Dept{d}.Univ{u}")
                kind = "master" if s % 4 == 0 else "student"
                add(student, RDF_TYPE, Iri(kind))
                add(student, "memberOf", dept)
                add(student, "name", Literal(f"Student {s}"))
                for course in rng.sample(courses, rng.randint(1, 3)):
                    add(student, "takesCourse", course)
                if rng.random() < 0.5:
                    add(student, "advisor", rng.choice(profs))
    return Graph(triples)


# ---------------------------------------------------------------------------
# Workload runner
# ---------------------------------------------------------------------------


@dataclass
class BenchRow:
    query: str
    k: int
    dataset: str
    opt_count: int
    answers: int | None = None
    median_ms: float | None = None
    error: str | None = None


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    FIELDS = ("query", "k", "dataset", "opt_count", "answers", "median_ms", "error")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.FIELDS, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(asdict(r))
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps([asdict(r) for r in self.rows], indent=2)

    def answer_counts(self) -> dict[tuple[str, int, str], int | None]:
        return {(r.query, r.k, r.dataset): r.answers for r in self.rows}

    def trend(self) -> str:
        """Per query and dataset, median time by k (report only)."""
        lines = []
        groups: dict[tuple[str, str], list[BenchRow]] = {}
        for r in self.rows:
            groups.setdefault((r.query, r.dataset), []).append(r)
        for (q, ds), grp in groups.items():
            grp = sorted(grp, key=lambda r: r.k)
            cells = []
            for r in grp:
                t = "err" if r.error else ("-" if r.median_ms is None else f"{r.median_ms:.2f}")
                cells.append(f"k={r.k}:{t}ms/{r.answers}")
            lines.append(f"{q} @ {ds}: " + "  ".join(cells))
        return "\n".join(lines)


def _timed(p: Pattern, g: Graph, repeats: int) -> tuple[int, float]:
    evaluate(p, g)  # warm-up, discarded
    times = []
    n = 0
    for _ in range(repeats):
        t0 = time.perf_counter()
        n = len(evaluate(p, g))
        times.append((time.perf_counter() - t0) * 1e3)
    return n, statistics.median(times)


def run_workload(queries: dict[str, Pattern], datasets, ks=range(5),
                 repeats: int = 5, workers: int = 1) -> BenchReport:
    """Evaluate every k-approximation of every query on every dataset.

    ``datasets`` is a ``{name: Graph}`` dict or a single Graph. With
    ``workers > 1`` rows run on a thread pool sharing the graphs and only
    answer counts are recorded. Failures land in the row's ``error``.
    """
    if isinstance(datasets, Graph):
        datasets = {"graph": datasets}
    if repeats < 1:
        raise ValueError("repeats must be positive")
    jobs = []
    for qname, q in queries.items():
        for k in ks:
            for dname, g in datasets.items():
                jobs.append((qname, q, k, dname, g))

    def run(job) -> BenchRow:
        qname, q, k, dname, g = job
        try:
            approx = k_approximate(q, k)
        except Exception as exc:  # noqa: BLE001 - reported per row
            return BenchRow(qname, k, dname, -1, error=f"{type(exc).__name__}: {exc}")
        row = BenchRow(qname, k, dname, opt_count(approx))
        try:
            if workers > 1:
                row.answers = len(evaluate(approx, g))
            else:
                row.answers, row.median_ms = _timed(approx, g, repeats)
        except Exception as exc:  # noqa: BLE001
            row.error = f"{type(exc).__name__}: {exc}"
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(j) for j in jobs]
    return BenchReport(rows)
