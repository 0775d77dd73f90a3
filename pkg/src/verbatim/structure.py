"""Self-adjointness and Pythagorean checks, ellipse classes, and graph extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotPythagoreanError
from .graph import ChromaticGraph
from .language import BuiltinLanguage, Language
from .words import Letters, Word


@dataclass(frozen=True)
class SelfAdjointReport:
    verdict: str
    witness: Word | None
    checked_length: int

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {"verdict": self.verdict,
                "witness": None if self.witness is None else self.witness.names,
                "checked_length": self.checked_length}


def check_self_adjoint(L: Language, max_len: int) -> SelfAdjointReport:
    """Pass iff ``w in L <=> w* in L`` for every word up to ``max_len``."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    inv = L.alphabet.involute_letters
    for w in L.words(max_len):
        if not L.member(inv(w)):
            return SelfAdjointReport("fail", Word(L.alphabet, w), max_len)
    return SelfAdjointReport("pass", None, max_len)


@dataclass(frozen=True)
class PythagoreanWitness:
    alpha: Word
    beta: Word
    gamma: Word
    missing: Word

    def to_json(self) -> dict:
        return {"alpha": self.alpha.names, "beta": self.beta.names,
                "gamma": self.gamma.names, "missing": self.missing.names}


@dataclass(frozen=True)
class PythagoreanReport:
    verdict: str
    checked_length: int
    witness: PythagoreanWitness | None = None
    self_adjoint: SelfAdjointReport | None = None
    #: conclusions longer than the cutoff that could not be checked
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def inconclusive_at_boundary(self) -> bool:
        return self.passed and self.skipped > 0

    def describe(self) -> str:
        if self.passed:
            return f"pass at length {self.checked_length}"
        if self.witness is None:
            return f"not self-adjoint: {self.self_adjoint.witness} has no adjoint in L"
        w = self.witness
        return f"alpha={w.alpha}, beta={w.beta}, gamma={w.gamma}: {w.missing} is missing"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "checked_length": self.checked_length,
            "inconclusive_at_boundary": self.inconclusive_at_boundary,
            "skipped_conclusions": self.skipped,
            "self_adjoint": None if self.self_adjoint is None else self.self_adjoint.to_json(),
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _key(w: Letters) -> tuple[int, Letters]:
    return (len(w), w)


def coellipse_pairs(L: Language, max_len: int) -> dict[Letters, set[Letters]]:
    """Map each ellipse ``alpha`` to the ``beta`` with ``beta* alpha`` a word of ``L``."""
    inv = L.alphabet.involute_letters
    pairs: dict[Letters, set[Letters]] = {}
    for w in L.words(max_len):
        for i in range(1, len(w)):
            pairs.setdefault(w[i:], set()).add(inv(w[:i]))
    return pairs


def check_pythagorean(L: Language, max_len: int) -> PythagoreanReport:
    """Check the Pythagorean property on all words of length at most ``max_len``.

    Conclusions longer than ``max_len`` are skipped; for a finite explicit
    language with ``max_len >= 2 * longest word`` nothing is skipped and the
    check is exact.
    """
    if max_len < 2:
        raise ValueError("max_len must be at least 2")
    sa = check_self_adjoint(L, max_len)
    if not sa.passed:
        return PythagoreanReport("fail", max_len, None, sa)
    A = L.alphabet
    inv = A.involute_letters
    skipped = 0
    pairs = coellipse_pairs(L, max_len)
    for alpha in sorted(pairs, key=_key):
        betas = sorted(pairs[alpha], key=_key)
        if 2 * len(alpha) <= max_len:
            square = inv(alpha) + alpha
            if not L.member(square):
                b = Word(A, betas[0])
                return PythagoreanReport(
                    "fail", max_len,
                    PythagoreanWitness(Word(A, alpha), b, b, Word(A, square)), sa)
        else:
            skipped += 1
        for beta in betas:
            for gamma in betas:
                if len(beta) + len(gamma) > max_len:
                    skipped += 1
                    continue
                target = inv(gamma) + beta
                if not L.member(target):
                    return PythagoreanReport(
                        "fail", max_len,
                        PythagoreanWitness(Word(A, alpha), Word(A, beta), Word(A, gamma),
                                           Word(A, target)), sa)
    return PythagoreanReport("pass", max_len, None, sa, skipped)


@dataclass
class EllipseTable:
    """Ellipses up to ``max_len`` partitioned into morphological-equivalence classes.

    ``classes[k][0]`` is the canonical representative of class ``k``: the
    shortest member, ties broken lexicographically by symbol order.
    """

    language: Language
    max_len: int
    ellipses: list[Word]
    classes: list[list[Word]]
    class_of: dict[Letters, int] = field(repr=False)

    def related(self, alpha: Word, beta: Word) -> bool:
        """``alpha ~= beta``, i.e. ``beta* alpha`` is in the language."""
        inv = self.language.alphabet.involute_letters
        return self.language.member(inv(beta.letters) + alpha.letters)

    def representative(self, k: int) -> Word:
        return self.classes[k][0]

    def to_json(self) -> dict:
        return {"max_len": self.max_len,
                "ellipses": [w.names for w in self.ellipses],
                "classes": [[w.names for w in c] for c in self.classes]}


def ellipse_table(L: Language, max_len: int) -> EllipseTable:
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    inv = L.alphabet.involute_letters
    found: set[Letters] = set()
    edges: list[tuple[Letters, Letters]] = []
    for w in L.words(2 * max_len):
        for i in range(max(1, len(w) - max_len), min(len(w), max_len + 1)):
            alpha, beta = w[i:], inv(w[:i])
            found.add(alpha)
            edges.append((alpha, beta))
    parent = {a: a for a in found}

    def root(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        if b in parent:
            ra, rb = root(a), root(b)
            if ra != rb:
                parent[max(ra, rb, key=_key)] = min(ra, rb, key=_key)
    groups: dict[Letters, list[Letters]] = {}
    for a in found:
        groups.setdefault(root(a), []).append(a)
    ordered = sorted((sorted(g, key=_key) for g in groups.values()), key=lambda g: _key(g[0]))
    A = L.alphabet
    classes = [[Word(A, w) for w in g] for g in ordered]
    class_of = {w.letters: k for k, c in enumerate(classes) for w in c}
    ellipses = [Word(A, w) for w in sorted(found, key=_key)]
    return EllipseTable(L, max_len, ellipses, classes, class_of)


def build_graph(L: Language, max_len: int) -> ChromaticGraph:
    """Ellipse classes as vertices, ``a``-edges ``[alpha] -> [beta]`` when ``beta* a alpha`` is in L.

    Refuses (``NotPythagoreanError``) when the Pythagorean check fails.
    """
    report = check_pythagorean(L, max(2, max_len))
    if not report.passed:
        raise NotPythagoreanError(report)
    table = ellipse_table(L, max_len)
    A = L.alphabet
    inv = A.involute_letters
    reps = [c[0] for c in table.classes]
    names = [str(r) for r in reps]
    edges = set()
    for u, alpha in enumerate(reps):
        for a in range(len(A)):
            head = (a,) + alpha.letters
            for v, beta in enumerate(reps):
                if L.member(inv(beta.letters) + head):
                    edges.add((names[u], names[v], A.symbols[a].name))
    anchors = {A.symbols[a].name: names[table.class_of[(a,)]]
               for a in range(len(A)) if (a,) in table.class_of}
    return ChromaticGraph(A, tuple(names), frozenset(edges), anchors, max_len)


def builtin_graph(L: BuiltinLanguage, depth: int) -> ChromaticGraph:
    """Closed-form chromatic graph of a built-in language, as ``build_graph`` would produce it.

    Vertices are heights; the class of height ``h >= 1`` is represented by
    ``h`` closing letters and height 0 (for the reducible languages) by the
    shortest balanced word.  This avoids enumerating words of length
    ``2 * depth``, which is infeasible for deep Motzkin graphs.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    A = L.alphabet
    names = A.names
    if L.name == "schur_loop":
        v = names[1]
        return ChromaticGraph(A, (v,), frozenset({(v, v, names[2])}), {names[1]: v}, depth)
    up, down = 0, 1
    flat = 2 if len(A) == 3 else None
    reps = {h: (down,) * h for h in range(1, depth + 1)}
    if L.name == "motzkin":
        reps[0] = (flat,)
    elif L.name == "dyck" and depth >= 2:
        reps[0] = (up, down)
    label = {h: str(Word(A, w)) for h, w in reps.items()}
    order = sorted(reps, key=lambda h: _key(reps[h]))
    edges = {(label[h], label[h + 1], names[down]) for h in reps if h + 1 in reps}
    if flat is not None:
        looped = [h for h in reps if h >= 1 or L.name == "motzkin"]
        edges |= {(label[h], label[h], names[flat]) for h in looped}
    anchors = {names[down]: label[1]}
    if L.name == "motzkin":
        anchors[names[flat]] = label[0]
    return ChromaticGraph(A, tuple(label[h] for h in order), frozenset(edges), anchors, depth)


def chromatic_graph(L: Language, depth: int) -> ChromaticGraph:
    """``builtin_graph`` for built-ins, ``build_graph`` otherwise."""
    if isinstance(L, BuiltinLanguage):
        return builtin_graph(L, depth)
    return build_graph(L, depth)


def graphs_isomorphic(g: ChromaticGraph, h: ChromaticGraph) -> bool:
    """Colored-graph isomorphism that also respects anchors.

    Vertices are matched by propagating from anchors along edges, which is
    complete for graphs whose every vertex is reachable from an anchor and
    whose transfer maps are partial injections (the graphs built here).
    """
    if g.alphabet != h.alphabet or len(g.vertices) != len(h.vertices):
        return False
    if set(g.q_anchors) != set(h.q_anchors):
        return False
    out_g: dict[tuple[str, str], list[str]] = {}
    for u, v, a in g.edges:
        out_g.setdefault((u, a), []).append(v)
    out_h: dict[tuple[str, str], list[str]] = {}
    for u, v, a in h.edges:
        out_h.setdefault((u, a), []).append(v)
    mapping: dict[str, str] = {}
    stack = []
    for a, v in g.q_anchors.items():
        w = h.q_anchors[a]
        if mapping.get(v, w) != w:
            return False
        mapping[v] = w
        stack.append(v)
    while stack:
        u = stack.pop()
        for a in g.alphabet.names:
            tg = out_g.get((u, a), [])
            th = out_h.get((mapping[u], a), [])
            if len(tg) != len(th):
                return False
            if len(tg) > 1:
                return False
            for x, y in zip(tg, th):
                if x in mapping:
                    if mapping[x] != y:
                        return False
                else:
                    mapping[x] = y
                    stack.append(x)
    if len(mapping) != len(g.vertices) or len(set(mapping.values())) != len(mapping):
        return False
    return {(mapping[u], mapping[v], a) for u, v, a in g.edges} == set(h.edges)
