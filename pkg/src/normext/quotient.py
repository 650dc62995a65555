"""Degree-truncated computation in graded quotients TV/(R).

Two independent engines compute graded dimensions, normal forms and
membership:

* ``LinearEngine`` (this module) -- exact sparse row reduction over
  Q(zeta_N).  The degree-d ideal component is built incrementally as
  V * I_{d-1} + sum_r r * T_{d - deg r}; the first summand arrives
  pre-echelonized (prefixing a fixed letter preserves deglex among
  same-degree words), so only the relation-tail rows need reduction.
* ``GBState`` (rewriting module) -- truncated noncommutative Buchberger
  completion with normal-word counting.

``hilbert_table`` can run either engine or both; "both" cross-checks them
degree by degree and raises on disagreement, which is the oracle pairing
the certificates rely on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .freealg import CoefficientModeError, Context, FreeElement, word_key
from .linalg import RowReducer
from .dsl import print_poly


class EngineDisagreementError(AssertionError):
    """The two engines disagree; a build-blocking defect, not bad input."""

    def __init__(self, label: str, degree: int, la: int, gb: int) -> None:
        super().__init__(
            f"engine disagreement for {label!r} at degree {degree}: "
            f"linear algebra {la} vs rewriting {gb}"
        )
        self.degree = degree


class Presentation:
    """Generators plus a homogeneous relation list in canonical form.

    Relations are normalized monic at their deglex-leading word, sorted,
    and deduplicated; zero elements are dropped so constructions that
    naturally produce them (coordinate fibers) need no special casing.
    """

    __slots__ = ("ctx", "relations", "label", "_key")

    def __init__(self, ctx: Context, relations, label: str = "") -> None:
        self.ctx = ctx
        rels = []
        for r in relations:
            if r.ctx != ctx:
                raise CoefficientModeError("relation from a different context")
            if r.is_zero():
                continue
            r.require_homogeneous("presentation relation")
            lead = max(r.terms, key=word_key)
            if ctx.mode == "field":
                r = r.scale(r.terms[lead].inv())
            rels.append(r)
        seen = set()
        uniq = []
        for r in sorted(rels, key=lambda f: (f.degree, word_key(max(f.terms, key=word_key)), print_poly(f))):
            text = print_poly(r)
            if text not in seen:
                seen.add(text)
                uniq.append(r)
        self.relations = tuple(uniq)
        self.label = label
        self._key = None

    def key(self) -> str:
        if self._key is None:
            self._key = json.dumps(
                {
                    "gens": self.ctx.gens,
                    "N": self.ctx.conductor,
                    "mode": self.ctx.mode,
                    "rels": [print_poly(r) for r in self.relations],
                },
                sort_keys=True,
            )
        return self._key

    def degrees(self) -> list[int]:
        return sorted({r.degree for r in self.relations})

    def require_field(self) -> None:
        if self.ctx.mode != "field":
            raise CoefficientModeError(
                "unit-mode coefficients without assignment; specialize the presentation first"
            )

    def text(self) -> str:
        rels = " ; ".join(print_poly(r) for r in self.relations)
        return f"<{', '.join(self.ctx.gens)} | {rels}>"

    def __repr__(self) -> str:
        return f"Presentation({self.label or self.text()})"


@dataclass(frozen=True)
class DegreeTable:
    label: str
    bound: int
    dims: tuple
    engine: str

    def to_tsv(self) -> str:
        lines = ["degree\tdim"]
        lines += [f"{d}\t{v}" for d, v in enumerate(self.dims)]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "bound": self.bound,
            "dims": list(self.dims),
            "engine": self.engine,
        }


class WordCodec:
    """Deglex-monotone integer codes for words over n letters."""

    def __init__(self, n: int) -> None:
        self.n = n
        self._offsets = [0]

    def offset(self, d: int) -> int:
        while len(self._offsets) <= d:
            k = len(self._offsets) - 1
            self._offsets.append(self._offsets[-1] + self.n**k)
        return self._offsets[d]

    def encode(self, word) -> int:
        rank = 0
        for a in word:
            rank = rank * self.n + a
        return self.offset(len(word)) + rank

    def decode(self, code: int, degree: int):
        rank = code - self.offset(degree)
        out = []
        for _ in range(degree):
            out.append(rank % self.n)
            rank //= self.n
        return tuple(reversed(out))

    def prefix_shift(self, i: int, d: int) -> int:
        """encode((i,)+w) - encode(w) for any word w of degree d-1."""
        return self.offset(d) - self.offset(d - 1) + i * self.n ** (d - 1)


class LinearEngine:
    """Exact row-reduction engine for one presentation."""

    def __init__(self, pres: Presentation, entry_limit: int | None = 40_000_000) -> None:
        pres.require_field()
        self.pres = pres
        self.codec = WordCodec(pres.ctx.n)
        self.levels: list[RowReducer] = []
        self.entry_limit = entry_limit

    def _relation_rows(self, d: int):
        """Rows r * v for each relation r and word v of degree d - deg r."""
        n = self.pres.ctx.n
        for r in self.pres.relations:
            k = d - r.degree
            if k < 0:
                continue
            base = [(self.codec.encode(u), c) for u, c in sorted(r.terms.items(), key=lambda t: word_key(t[0]))]
            # appending v of degree k maps code(u) -> (code(u)-off(du))*n^k + off(du+k) + rank(v)
            du = r.degree
            off_u = self.codec.offset(du)
            off_t = self.codec.offset(du + k)
            scaled = [((code - off_u) * n**k + off_t, c) for code, c in base]
            for rank_v in range(n**k):
                yield {code + rank_v: c for code, c in scaled}

    def extend(self, bound: int) -> None:
        n = self.pres.ctx.n
        while len(self.levels) <= bound:
            d = len(self.levels)
            red = RowReducer(entry_limit=self.entry_limit)
            if d > 0 and self.levels[d - 1].pivots:
                prev = self.levels[d - 1]
                for i in range(n):
                    shift = self.codec.prefix_shift(i, d)
                    for lead in sorted(prev.pivots):
                        row = prev.pivots[lead]
                        red.insert_pivot_row({c + shift: v for c, v in row.items()})
            for row in self._relation_rows(d):
                red.insert(row)
            self.levels.append(red)

    def ideal_dim(self, d: int) -> int:
        self.extend(d)
        return self.levels[d].rank

    def quotient_dim(self, d: int) -> int:
        return self.pres.ctx.n**d - self.ideal_dim(d)

    def dims(self, bound: int) -> list[int]:
        self.extend(bound)
        return [self.quotient_dim(d) for d in range(bound + 1)]

    def _encode_element(self, f: FreeElement) -> dict:
        return {self.codec.encode(w): c for w, c in f.terms.items()}

    def membership(self, f: FreeElement) -> bool:
        if f.is_zero():
            return True
        d = f.require_homogeneous("membership")
        self.extend(d)
        return self.levels[d].contains(self._encode_element(f))

    def ideal_basis(self, d: int) -> list[FreeElement]:
        self.extend(d)
        out = []
        for lead in sorted(self.levels[d].pivots):
            row = self.levels[d].pivots[lead]
            f = FreeElement(self.pres.ctx)
            f.terms = {self.codec.decode(c, d): v for c, v in row.items()}
            out.append(f)
        return out


_LA_CACHE: dict[str, LinearEngine] = {}
_GB_CACHE: dict = {}


def linear_engine(pres: Presentation) -> LinearEngine:
    eng = _LA_CACHE.get(pres.key())
    if eng is None:
        eng = LinearEngine(pres)
        _LA_CACHE[pres.key()] = eng
    return eng


def gb_engine(pres: Presentation, bound: int):
    from .rewriting import GBState

    key = pres.key()
    state = _GB_CACHE.get(key)
    if state is None or state.bound < bound:
        state = GBState(pres, bound)
        _GB_CACHE[key] = state
    return state


def ideal_basis(pres: Presentation, d: int) -> list[FreeElement]:
    """Echelonized basis of the degree-d component of the ideal (R)."""
    pres.require_field()
    return linear_engine(pres).ideal_basis(d)


def hilbert_table(pres: Presentation, bound: int, engine: str = "both") -> DegreeTable:
    """Graded dimensions of TV/(R) up to bound, via the chosen engine(s)."""
    pres.require_field()
    label = pres.label or pres.text()
    if engine == "la":
        dims = linear_engine(pres).dims(bound)
    elif engine == "gb":
        dims = gb_engine(pres, bound).dims(bound)
    elif engine == "both":
        la = linear_engine(pres).dims(bound)
        gb = gb_engine(pres, bound).dims(bound)
        for d, (a, b) in enumerate(zip(la, gb)):
            if a != b:
                raise EngineDisagreementError(label, d, a, b)
        dims = la
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return DegreeTable(label=label, bound=bound, dims=tuple(dims), engine=engine)


def membership(f: FreeElement, pres: Presentation, engine: str = "gb", bound: int | None = None) -> bool:
    """Does f lie in the two-sided ideal (R)?  Degree-truncated, exact."""
    pres.require_field()
    if f.is_zero():
        return True
    d = f.require_homogeneous("membership")
    if engine == "la":
        return linear_engine(pres).membership(f)
    if engine == "gb":
        return gb_engine(pres, max(d, bound or 0)).normal_form(f).is_zero()
    if engine == "both":
        a = linear_engine(pres).membership(f)
        b = gb_engine(pres, max(d, bound or 0)).normal_form(f).is_zero()
        if a != b:
            raise EngineDisagreementError(pres.label or pres.text(), d, int(a), int(b))
        return a
    raise ValueError(f"unknown engine {engine!r}")


def normal_form(f: FreeElement, pres: Presentation, bound: int | None = None) -> FreeElement:
    """Deglex normal form of f modulo the truncated rewriting system."""
    pres.require_field()
    if f.is_zero():
        return f
    d = f.require_homogeneous("normal form")
    return gb_engine(pres, max(d, bound or 0)).normal_form(f)
