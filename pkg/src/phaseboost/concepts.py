"""Boolean concept classes and their Fourier spectra.

Concepts evaluate to bits {0,1}; the +-1 view (-1)^f(x) is what spectra and
phase states use. Variable i means bit i of the integer input under the global
little-endian convention. Evaluation is lazy and vectorized; truth tables are
materialized only when a spectrum or phase state asks for them.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolationError, ParameterError
from .statevec import StateVector, _indices, check_qubit_count, phase_state_of, wht_array

PARSEVAL_ATOL = 1e-9


class BooleanConcept:
    """Base: subclasses implement evaluate_indices over integer input arrays."""

    n: int
    kind: str = "?"

    def evaluate_indices(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def evaluate(self, x: int) -> int:
        return int(self.evaluate_indices(np.asarray([x], dtype=np.uint32))[0])

    def truth_table(self) -> np.ndarray:
        return self.evaluate_indices(_indices(self.n)).astype(np.uint8)

    def signs(self) -> np.ndarray:
        return 1.0 - 2.0 * self.truth_table().astype(np.float64)

    def phase_state(self) -> StateVector:
        return phase_state_of(self)


def _check_var(var: int, n: int) -> int:
    var = int(var)
    if not 0 <= var < n:
        raise ContractViolationError(f"variable index {var} out of range for n={n}")
    return var


@dataclass(frozen=True)
class Parity(BooleanConcept):
    n: int
    mask: int
    kind: str = field(default="parity", init=False, repr=False)

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        if not 0 <= self.mask < (1 << self.n):
            raise ContractViolationError(f"parity mask {self.mask} out of range for n={self.n}")

    def evaluate_indices(self, x: np.ndarray) -> np.ndarray:
        return (np.bitwise_count(x.astype(np.uint32) & np.uint32(self.mask)) & 1).astype(np.uint8)


@dataclass(frozen=True)
class Junta(BooleanConcept):
    """A function of k = |support| variables, tabulated over their 2^k settings.

    Table index packs support variables in ascending order: bit j of the index
    is the value of variable support[j].
    """

    n: int
    support: tuple[int, ...]
    table: tuple[int, ...]
    kind: str = field(default="junta", init=False, repr=False)

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        support = tuple(_check_var(v, self.n) for v in self.support)
        if list(support) != sorted(set(support)):
            raise ParameterError(f"junta support must be strictly increasing, got {support}")
        table = tuple(int(b) for b in self.table)
        if len(table) != 1 << len(support):
            raise ParameterError(
                f"junta table has {len(table)} entries, expected {1 << len(support)}"
            )
        if any(b not in (0, 1) for b in table):
            raise ParameterError("junta table entries must be bits")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "table", table)

    @property
    def k(self) -> int:
        return len(self.support)

    def support_mask(self) -> int:
        mask = 0
        for v in self.support:
            mask |= 1 << v
        return mask

    def evaluate_indices(self, x: np.ndarray) -> np.ndarray:
        key = np.zeros(x.shape, dtype=np.uint32)
        for j, v in enumerate(self.support):
            key |= ((x >> np.uint32(v)) & 1).astype(np.uint32) << np.uint32(j)
        table = np.asarray(self.table, dtype=np.uint8)
        return table[key]


@dataclass(frozen=True)
class DecisionTree(BooleanConcept):
    """Node-array decision tree; size is the total node count (internal + leaves).

    nodes[0] is the root. Internal nodes are ("node", var, lo, hi) with child
    indices strictly greater than their own (the array is topologically
    ordered); leaves are ("leaf", bit). Input bit var = 0 goes to lo.
    """

    n: int
    nodes: tuple[tuple, ...]
    kind: str = field(default="dt", init=False, repr=False)

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        nodes = tuple(tuple(node) for node in self.nodes)
        if not nodes:
            raise ParameterError("decision tree needs at least one node")
        for i, node in enumerate(nodes):
            if node[0] == "leaf":
                if len(node) != 2 or node[1] not in (0, 1):
                    raise ParameterError(f"bad leaf node at {i}: {node}")
            elif node[0] == "node":
                if len(node) != 4:
                    raise ParameterError(f"bad internal node at {i}: {node}")
                _check_var(node[1], self.n)
                for child in node[2:]:
                    if not (isinstance(child, int) and i < child < len(nodes)):
                        raise ParameterError(
                            f"child index {child} of node {i} must lie in ({i}, {len(nodes)})"
                        )
            else:
                raise ParameterError(f"unknown node tag {node[0]!r}")
        object.__setattr__(self, "nodes", nodes)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def evaluate_indices(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape, dtype=np.uint8)
        stack: list[tuple[int, np.ndarray]] = [(0, np.ones(x.shape, dtype=bool))]
        while stack:
            node_idx, sel = stack.pop()
            if not sel.any():
                continue
            node = self.nodes[node_idx]
            if node[0] == "leaf":
                out[sel] = node[1]
            else:
                _, var, lo, hi = node
                bit_on = ((x >> np.uint32(var)) & 1).astype(bool)
                stack.append((lo, sel & ~bit_on))
                stack.append((hi, sel & bit_on))
        return out


@dataclass(frozen=True)
class Dnf(BooleanConcept):
    """OR of AND terms; a term is a tuple of literals (var, negated)."""

    n: int
    terms: tuple[tuple[tuple[int, bool], ...], ...]
    kind: str = field(default="dnf", init=False, repr=False)

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        terms = []
        for term in self.terms:
            lits = tuple((_check_var(v, self.n), bool(neg)) for v, neg in term)
            if not lits:
                raise ParameterError("empty DNF term (constant-true) is not representable")
            if len({v for v, _ in lits}) != len(lits):
                raise ParameterError(f"term repeats a variable: {lits}")
            terms.append(lits)
        if not terms:
            raise ParameterError("DNF needs at least one term")
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def s(self) -> int:
        return len(self.terms)

    def evaluate_indices(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape, dtype=bool)
        for term in self.terms:
            hit = np.ones(x.shape, dtype=bool)
            for var, neg in term:
                bit = ((x >> np.uint32(var)) & 1).astype(bool)
                hit &= ~bit if neg else bit
            out |= hit
        return out.astype(np.uint8)


@dataclass(frozen=True)
class ThresholdOfDnfs(BooleanConcept):
    """f(x) = 1 iff at least `thresh` of the input DNFs accept x."""

    n: int
    thresh: int
    dnfs: tuple[Dnf, ...]
    kind: str = field(default="tac", init=False, repr=False)

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        if not self.dnfs:
            raise ParameterError("threshold circuit needs at least one DNF input")
        if any(d.n != self.n for d in self.dnfs):
            raise ParameterError("every input DNF must share the ambient n")
        if not 1 <= self.thresh <= len(self.dnfs):
            raise ParameterError(
                f"threshold {self.thresh} out of range for fanin {len(self.dnfs)}"
            )
        object.__setattr__(self, "dnfs", tuple(self.dnfs))

    @property
    def m(self) -> int:
        return len(self.dnfs)

    def evaluate_indices(self, x: np.ndarray) -> np.ndarray:
        count = np.zeros(x.shape, dtype=np.int64)
        for d in self.dnfs:
            count += d.evaluate_indices(x)
        return (count >= self.thresh).astype(np.uint8)


@dataclass(frozen=True)
class FourierSpectrum:
    """f_hat(S) of the +-1 view, indexed by mask; Parseval mass 1."""

    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        assert coeffs.shape == (1 << self.n,)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)


def fourier_spectrum(c: BooleanConcept) -> FourierSpectrum:
    """f_hat(S) = 2^-n sum_x (-1)^f(x) (-1)^<S,x>; computed by one fast transform."""
    signs = c.signs()
    coeffs = wht_array(signs).real
    coeffs *= 2.0 ** (-c.n / 2)
    mass = float(np.sum(coeffs**2))
    assert abs(mass - 1.0) <= PARSEVAL_ATOL, f"Parseval violated: {mass}"
    return FourierSpectrum(c.n, coeffs)


def dt_l1_norm(c: DecisionTree) -> float:
    """sum_S |f_hat(S)|; at most the tree's node count."""
    return float(np.sum(np.abs(fourier_spectrum(c).coeffs)))


def spectral_concentration(spec: FourierSpectrum, budget: int) -> float:
    """Fourier mass on the `budget` largest-|f_hat| masks (ties: smaller mask first)."""
    if budget < 1:
        raise ParameterError(f"budget must be >= 1, got {budget}")
    coeffs = spec.coeffs
    order = np.lexsort((np.arange(coeffs.shape[0]), -np.abs(coeffs)))
    top = order[: min(budget, coeffs.shape[0])]
    return float(np.sum(coeffs[top] ** 2))


# ---------------------------------------------------------------------------
# Seeded generators


def random_parity(n: int, rng: np.random.Generator) -> Parity:
    return Parity(n, int(rng.integers(0, 1 << n)))


def random_junta(n: int, k: int, rng: np.random.Generator) -> Junta:
    if not 0 <= k <= n:
        raise ParameterError(f"junta arity {k} out of range for n={n}")
    support = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
    table = tuple(int(b) for b in rng.integers(0, 2, size=1 << k))
    return Junta(n, support, table)


def random_decision_tree(n: int, size: int, rng: np.random.Generator) -> DecisionTree:
    """Grow by repeated leaf splitting; sizes are always odd (2 splits + 1).

    Variables are drawn uniformly and may repeat along a path; any such tree
    still satisfies the l1 spectral bound its size implies.
    """
    if size < 1 or size % 2 == 0:
        raise ParameterError(f"tree size must be odd and positive, got {size}")
    nodes: list[tuple] = [("leaf", int(rng.integers(0, 2)))]
    leaves = [0]
    for _ in range((size - 1) // 2):
        pick = int(rng.integers(0, len(leaves)))
        pos = leaves.pop(pick)
        var = int(rng.integers(0, n))
        lo, hi = len(nodes), len(nodes) + 1
        nodes.append(("leaf", int(rng.integers(0, 2))))
        nodes.append(("leaf", int(rng.integers(0, 2))))
        nodes[pos] = ("node", var, lo, hi)
        leaves.extend([lo, hi])
    return DecisionTree(n, tuple(nodes))


def random_dnf(n: int, s: int, max_width: int, rng: np.random.Generator) -> Dnf:
    if s < 1:
        raise ParameterError(f"term count must be >= 1, got {s}")
    if not 1 <= max_width <= n:
        raise ParameterError(f"max term width {max_width} out of range for n={n}")
    terms = []
    for _ in range(s):
        width = int(rng.integers(1, max_width + 1))
        chosen = sorted(int(v) for v in rng.choice(n, size=width, replace=False))
        terms.append(tuple((v, bool(rng.integers(0, 2))) for v in chosen))
    return Dnf(n, tuple(terms))


def random_tac(
    n: int,
    m: int,
    thresh: int | None,
    rng: np.random.Generator,
    dnf_terms: int = 2,
    dnf_width: int = 3,
) -> ThresholdOfDnfs:
    if m < 1:
        raise ParameterError(f"fanin must be >= 1, got {m}")
    if thresh is None:
        thresh = int(rng.integers(1, m + 1))
    dnfs = tuple(random_dnf(n, dnf_terms, min(dnf_width, n), rng) for _ in range(m))
    return ThresholdOfDnfs(n, thresh, dnfs)


_KINDS = ("parity", "junta", "dt", "dnf", "tac")


def random_concept(kind: str, n: int, seed: int, **params) -> BooleanConcept:
    """Seed-deterministic dispatcher over the concept generators."""
    rng = np.random.default_rng(seed)
    if kind == "parity":
        return random_parity(n, rng)
    if kind == "junta":
        return random_junta(n, params["k"], rng)
    if kind == "dt":
        return random_decision_tree(n, params["size"], rng)
    if kind == "dnf":
        return random_dnf(n, params["s"], params.get("max_width", min(3, n)), rng)
    if kind == "tac":
        return random_tac(
            n,
            params["m"],
            params.get("thresh"),
            rng,
            dnf_terms=params.get("dnf_terms", 2),
            dnf_width=params.get("dnf_width", 3),
        )
    raise ParameterError(f"unknown concept kind {kind!r}; expected one of {_KINDS}")


# ---------------------------------------------------------------------------
# Text serialization: one concept per line, used by the CLI for corpora.
#
#   parity <n> <mask>
#   junta <n> <v1,v2,..|-> <table bits over 2^k>
#   dt <n> <node;node;..>        node = L<bit> | N<var>,<lo>,<hi>
#   dnf <n> <term|term|..>       term = +v or -v joined by commas
#   tac <n> <thresh> <dnfterms;dnfterms;..>


def _term_to_text(term: tuple[tuple[int, bool], ...]) -> str:
    return ",".join(("-" if neg else "+") + str(v) for v, neg in term)


def _term_from_text(text: str) -> tuple[tuple[int, bool], ...]:
    lits = []
    for tok in text.split(","):
        if not tok or tok[0] not in "+-":
            raise ParameterError(f"bad literal {tok!r}")
        lits.append((int(tok[1:]), tok[0] == "-"))
    return tuple(lits)


def concept_to_text(c: BooleanConcept) -> str:
    if isinstance(c, Parity):
        return f"parity {c.n} {c.mask}"
    if isinstance(c, Junta):
        sup = ",".join(map(str, c.support)) if c.support else "-"
        table = "".join(map(str, c.table))
        return f"junta {c.n} {sup} {table}"
    if isinstance(c, DecisionTree):
        parts = []
        for node in c.nodes:
            if node[0] == "leaf":
                parts.append(f"L{node[1]}")
            else:
                parts.append(f"N{node[1]},{node[2]},{node[3]}")
        return f"dt {c.n} {';'.join(parts)}"
    if isinstance(c, Dnf):
        return f"dnf {c.n} {'|'.join(_term_to_text(t) for t in c.terms)}"
    if isinstance(c, ThresholdOfDnfs):
        payload = ";".join("|".join(_term_to_text(t) for t in d.terms) for d in c.dnfs)
        return f"tac {c.n} {c.thresh} {payload}"
    raise ParameterError(f"cannot serialize {type(c).__name__}")


def concept_from_text(line: str) -> BooleanConcept:
    fields = line.strip().split()
    if not fields:
        raise ParameterError("empty concept line")
    kind = fields[0]
    try:
        if kind == "parity":
            return Parity(int(fields[1]), int(fields[2]))
        if kind == "junta":
            n = int(fields[1])
            support = () if fields[2] == "-" else tuple(int(v) for v in fields[2].split(","))
            table = tuple(int(b) for b in fields[3])
            return Junta(n, support, table)
        if kind == "dt":
            n = int(fields[1])
            nodes: list[tuple] = []
            for tok in fields[2].split(";"):
                if tok.startswith("L"):
                    nodes.append(("leaf", int(tok[1:])))
                elif tok.startswith("N"):
                    var, lo, hi = (int(p) for p in tok[1:].split(","))
                    nodes.append(("node", var, lo, hi))
                else:
                    raise ParameterError(f"bad node token {tok!r}")
            return DecisionTree(n, tuple(nodes))
        if kind == "dnf":
            n = int(fields[1])
            return Dnf(n, tuple(_term_from_text(t) for t in fields[2].split("|")))
        if kind == "tac":
            n = int(fields[1])
            thresh = int(fields[2])
            dnfs = tuple(
                Dnf(n, tuple(_term_from_text(t) for t in part.split("|")))
                for part in fields[3].split(";")
            )
            return ThresholdOfDnfs(n, thresh, dnfs)
    except (IndexError, ValueError) as exc:
        raise ParameterError(f"cannot parse concept line {line!r}: {exc}") from None
    raise ParameterError(f"unknown concept kind {kind!r}")


def save_concepts(path: str, concepts: list[BooleanConcept]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in concepts:
            fh.write(concept_to_text(c) + "\n")


def load_concepts(path: str) -> list[BooleanConcept]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(concept_from_text(line))
    return out
