"""Kazhdan-Lusztig tables on the affine Weyl group and layer predictions.

Conventions.  Polynomials are exposed in a formal variable t with only even
exponents: the classical polynomial in q is evaluated at q = t^2.  Group
elements come from the alcove module; their lengths are always hyperplane
counts, never word lengths, and reduced words are only carried along as
labels.  The recursion works with left descents; inverse polynomials come
from inverting the sign-twisted triangular matrix of KL polynomials, and the
defining identity is reverified on every Bruhat interval after the fact.
Radical-layer predictions read the coefficient of t^(l(lam) - l(nu) - n) in
the inverse polynomial of the pair of minimal carriers; character formulas
alternate Weyl characters of the dominant dot-images against KL values at 1.
Tables are cached on disk per (type, rank, e, length bound) when
GRKOSZUL_CACHE_DIR is set, keyed by a content hash that includes the table
format version.
"""

import hashlib
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import check, require
from .alcove import (
    AffineWeylElement,
    RootDatum,
    Weight,
    WeightIdealSet,
    _closure_set,
    _mat_mul,
    _mat_vec,
    compose,
    dominant_conjugate,
    element_inverse,
    identity_element,
    linkage,
    wall_reflections,
    weyl_orbit,
)

_TABLE_VERSION = 1


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial, stored as sorted (exponent, coefficient)
    pairs with zero coefficients dropped."""

    terms: tuple[tuple[int, int], ...]

    @staticmethod
    def from_dict(coeffs: dict) -> "LaurentPoly":
        return LaurentPoly(tuple(sorted((e, c) for e, c in coeffs.items() if c != 0)))

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly(())

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly(((0, 1),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent: int) -> int:
        for e, c in self.terms:
            if e == exponent:
                return c
        return 0

    def degree(self) -> int | None:
        return self.terms[-1][0] if self.terms else None

    def evaluate(self, value: int) -> int:
        return sum(c * value ** e for e, c in self.terms)

    @property
    def even(self) -> bool:
        return all(e % 2 == 0 for e, _ in self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms:
            out[e] = out.get(e, 0) + c
        return LaurentPoly.from_dict(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms:
            out[e] = out.get(e, 0) - c
        return LaurentPoly.from_dict(out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(out)

    def shifted(self, k: int) -> "LaurentPoly":
        return LaurentPoly(tuple((e + k, c) for e, c in self.terms))

    def scaled(self, factor: int) -> "LaurentPoly":
        return LaurentPoly.from_dict({e: factor * c for e, c in self.terms})


# Classical polynomials in q are plain {exponent: coefficient} dicts while
# the recursion runs; only the public surface doubles exponents into t.

def _padd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
        if out[e] == 0:
            del out[e]
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _pshift(a: dict, k: int) -> dict:
    return {e + k: c for e, c in a.items()}


def _pscale(a: dict, factor: int) -> dict:
    return {} if factor == 0 else {e: factor * c for e, c in a.items()}


def _to_t_poly(classical: dict) -> LaurentPoly:
    return LaurentPoly.from_dict({2 * e: c for e, c in classical.items()})


def _element_sort_key(elem: AffineWeylElement):
    return (elem.length, elem.finite_part, elem.translation)


def _is_reflection(rd: RootDatum, elem: AffineWeylElement) -> bool:
    """Order-2 elements whose finite part fixes a hyperplane are exactly the
    reflections in arrangement hyperplanes (roots are primitive, so the
    translation part of an involution is an integer multiple of the root)."""
    m = elem.finite_part
    if _mat_mul(m, m) != tuple(tuple(1 if i == j else 0 for j in range(rd.rank))
                               for i in range(rd.rank)):
        return False
    if sum(m[i][i] for i in range(rd.rank)) != rd.rank - 2:
        return False
    doubled = tuple(x + t for x, t in zip(_mat_vec(m, elem.translation),
                                          elem.translation))
    return all(x == 0 for x in doubled)


@dataclass(eq=False)
class CoxeterTable:
    """Shelled enumeration of W ltimes eZPhi up to a length bound.

    elements is sorted by (length, matrix, translation); words holds one
    reduced word per element over wall indices (simple walls 0..rank-1, the
    affine wall last), recorded in composition order, first letter applied
    last.  lower_sets[i] is the set of indices Bruhat-below elements[i],
    built from reflection covers and closed transitively.
    """

    datum: RootDatum
    e: int
    max_length: int
    elements: tuple[AffineWeylElement, ...]
    words: tuple[tuple[int, ...], ...]
    left_descents: tuple[frozenset[int], ...]
    right_descents: tuple[frozenset[int], ...]
    lower_sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        self.index = {elem: i for i, elem in enumerate(self.elements)}

    def element_count_by_length(self) -> tuple[int, ...]:
        counts = [0] * (self.max_length + 1)
        for elem in self.elements:
            counts[elem.length] += 1
        return tuple(counts)

    def bruhat_leq(self, x: AffineWeylElement, w: AffineWeylElement) -> bool:
        xi = self.index.get(x)
        wi = self.index.get(w)
        require(xi is not None and wi is not None, "elements must be in the table")
        return xi in self.lower_sets[wi]

    def word_label(self, i: int) -> str:
        word = self.words[i]
        return ".".join(str(k) for k in word) if word else "e"


def _bfs_elements(rd: RootDatum, e: int, max_length: int, side: str):
    walls = wall_reflections(rd, e)
    start = identity_element(rd.rank)
    words: dict[AffineWeylElement, tuple[int, ...]] = {start: ()}
    shell = [start]
    shells = [[start]]
    while shell and shells[-1][0].length < max_length:
        found: dict[AffineWeylElement, tuple[int, ...]] = {}
        for elem in shell:
            for i, s in enumerate(walls):
                cand = compose(rd, e, elem, s) if side == "right" else compose(rd, e, s, elem)
                check(abs(cand.length - elem.length) == 1,
                      "a wall reflection must change length by exactly one")
                if cand.length == elem.length + 1 and cand not in words and cand not in found:
                    found[cand] = (words[elem] + (i,)) if side == "right" else ((i,) + words[elem])
        if not found:
            break
        shell = sorted(found, key=_element_sort_key)
        shells.append(shell)
        words.update(found)
    return words, shells


def coxeter_enumerate(rd: RootDatum, e: int, max_length: int) -> CoxeterTable:
    """Enumerate all elements up to the length bound with descents and
    Bruhat order.

    Elements are grown by right multiplication; an independent left
    multiplication pass must reproduce exactly the same set.  Covers are
    detected as reflection quotients with length difference one, and the
    Bruhat order is their transitive closure, which refines length by
    construction.
    """
    require(e >= 1, "e must be a positive integer")
    require(max_length >= 0, "the length bound must be non-negative")
    words_right, _ = _bfs_elements(rd, e, max_length, "right")
    words_left, _ = _bfs_elements(rd, e, max_length, "left")
    check(set(words_right) == set(words_left),
          "left and right enumerations must agree element by element")

    elements = tuple(sorted(words_right, key=_element_sort_key))
    index = {elem: i for i, elem in enumerate(elements)}
    words = tuple(words_right[elem] for elem in elements)

    walls = wall_reflections(rd, e)
    left, right = [], []
    for elem in elements:
        left.append(frozenset(i for i, s in enumerate(walls)
                              if compose(rd, e, s, elem).length < elem.length))
        right.append(frozenset(i for i, s in enumerate(walls)
                               if compose(rd, e, elem, s).length < elem.length))

    inverses = [element_inverse(rd, e, elem) for elem in elements]
    lower: list[frozenset[int]] = []
    by_length: dict[int, list[int]] = {}
    for i, elem in enumerate(elements):
        below = {i}
        for xi in by_length.get(elem.length - 1, []):
            quotient = compose(rd, e, elem, inverses[xi])
            if _is_reflection(rd, quotient):
                below.update(lower[xi])
        lower.append(frozenset(below))
        by_length.setdefault(elem.length, []).append(i)

    return CoxeterTable(
        datum=rd,
        e=e,
        max_length=max_length,
        elements=elements,
        words=words,
        left_descents=tuple(left),
        right_descents=tuple(right),
        lower_sets=tuple(lower),
    )


@dataclass(eq=False)
class KlTables:
    """KL polynomials and their inverses over one CoxeterTable.

    kl and inverse map element index pairs (x, w) with x Bruhat-below w to
    classical coefficient dicts in q; the public accessors return the
    even-exponent t versions.  intervals_verified counts the Bruhat
    intervals on which the two-sided inversion identity was checked.
    """

    table: CoxeterTable
    kl: dict[tuple[int, int], dict[int, int]]
    inverse: dict[tuple[int, int], dict[int, int]]
    intervals_verified: int

    def kl_polynomial(self, x: AffineWeylElement, w: AffineWeylElement) -> LaurentPoly:
        xi, wi = self.table.index.get(x), self.table.index.get(w)
        require(xi is not None and wi is not None, "elements must be in the table")
        return _to_t_poly(self.kl.get((xi, wi), {}))

    def inverse_polynomial(self, x: AffineWeylElement, w: AffineWeylElement) -> LaurentPoly:
        xi, wi = self.table.index.get(x), self.table.index.get(w)
        require(xi is not None and wi is not None, "elements must be in the table")
        return _to_t_poly(self.inverse.get((xi, wi), {}))

    def pair_rows(self) -> list[tuple[str, str, str, str]]:
        """(x word, w word, dense P, dense Q) per pair x <= w, sorted by
        (length, word); the dense strings list classical coefficients
        ascending from degree 0."""
        t = self.table
        key = lambda i: (t.elements[i].length, t.words[i])
        rows = []
        for wi in sorted(range(len(t.elements)), key=key):
            for xi in sorted(t.lower_sets[wi], key=key):
                rows.append((t.word_label(xi), t.word_label(wi),
                             _dense_coeffs(self.kl[(xi, wi)]),
                             _dense_coeffs(self.inverse[(xi, wi)])))
        return rows

    def dump_lines(self) -> list[str]:
        return ["x=%s w=%s p=%s q=%s" % row for row in self.pair_rows()]


def _dense_coeffs(classical: dict) -> str:
    if not classical:
        return "0"
    top = max(classical)
    return ",".join(str(classical.get(k, 0)) for k in range(top + 1))


def _mu(classical: dict, lw: int, lz: int) -> int:
    if (lw - lz) % 2 == 0:
        return 0
    return classical.get((lw - lz - 1) // 2, 0)


def kl_and_inverse_tables(table: CoxeterTable) -> KlTables:
    """Fill the KL polynomials by the left-descent recursion, invert the
    sign-twisted matrix, and verify the inversion identity on every
    interval, both ways round."""
    rd, e = table.datum, table.e
    walls = wall_reflections(rd, e)
    elements = table.elements
    index = table.index
    lengths = [elem.length for elem in elements]

    kl: dict[tuple[int, int], dict[int, int]] = {}
    for wi, w in enumerate(elements):
        if lengths[wi] == 0:
            kl[(wi, wi)] = {0: 1}
            continue
        s = min(table.left_descents[wi])
        v = compose(rd, e, walls[s], w)
        vi = index[v]
        z_corrections = []
        for zi in table.lower_sets[vi]:
            if s in table.left_descents[zi]:
                mu = _mu(kl[(zi, vi)], lengths[vi], lengths[zi])
                if mu != 0:
                    z_corrections.append((zi, mu))
        for xi in table.lower_sets[wi]:
            if xi == wi:
                kl[(xi, wi)] = {0: 1}
                continue
            x = elements[xi]
            sx = compose(rd, e, walls[s], x)
            sxi = index[sx]
            c = 1 if sx.length < x.length else 0
            value = _padd(_pshift(kl.get((sxi, vi), {}), 1 - c),
                          _pshift(kl.get((xi, vi), {}), c))
            for zi, mu in z_corrections:
                contribution = kl.get((xi, zi), {})
                if contribution:
                    value = _padd(value, _pshift(_pscale(contribution, mu),
                                                 (lengths[wi] - lengths[zi]) // 2),
                                  sign=-1)
            check(value.get(0) == 1, "KL polynomials must have constant term 1")
            check(max(value) * 2 <= lengths[wi] - lengths[xi] - 1,
                  "KL polynomial degree must respect the length gap")
            kl[(xi, wi)] = value

    inverse: dict[tuple[int, int], dict[int, int]] = {}
    for wi in range(len(elements)):
        for xi in table.lower_sets[wi]:
            if xi == wi:
                inverse[(xi, wi)] = {0: 1}
                continue
            total: dict[int, int] = {}
            for vi in table.lower_sets[wi]:
                if vi == wi or xi not in table.lower_sets[vi]:
                    continue
                sign = -1 if (lengths[wi] - lengths[vi]) % 2 else 1
                total = _padd(total, _pscale(_pmul(inverse[(xi, vi)], kl[(vi, wi)]), sign))
            value = _pscale(total, -1)
            check(value.get(0) == 1, "inverse polynomials must have constant term 1")
            check(max(value) * 2 <= lengths[wi] - lengths[xi] - 1,
                  "inverse polynomial degree must respect the length gap")
            inverse[(xi, wi)] = value

    tables = KlTables(table=table, kl=kl, inverse=inverse, intervals_verified=0)
    tables.intervals_verified = verify_inversion(tables)
    return tables


def verify_inversion(tables: KlTables) -> int:
    """Assert the alternating-sum identity on every Bruhat interval, composing
    the inverse table against the KL table on both sides, plus the descent
    invariance of KL polynomials.  Returns the number of intervals checked."""
    table = tables.table
    lengths = [elem.length for elem in table.elements]
    count = 0
    for wi in range(len(table.elements)):
        for xi in table.lower_sets[wi]:
            left: dict[int, int] = {}
            right: dict[int, int] = {}
            for vi in table.lower_sets[wi]:
                if xi not in table.lower_sets[vi]:
                    continue
                sign = -1 if (lengths[wi] - lengths[vi]) % 2 else 1
                left = _padd(left, _pscale(_pmul(tables.inverse[(xi, vi)],
                                                 tables.kl[(vi, wi)]), sign))
                sign = -1 if (lengths[vi] - lengths[xi]) % 2 else 1
                right = _padd(right, _pscale(_pmul(tables.kl[(xi, vi)],
                                                   tables.inverse[(vi, wi)]), sign))
            expected = {0: 1} if xi == wi else {}
            check(left == expected, "inversion identity must hold on every interval")
            check(right == expected, "flipped inversion identity must hold on every interval")
            count += 1

    rd, e = table.datum, table.e
    walls = wall_reflections(rd, e)
    for wi in range(len(table.elements)):
        for s in table.left_descents[wi]:
            for xi in table.lower_sets[wi]:
                sx = compose(rd, e, walls[s], table.elements[xi])
                if sx.length > lengths[xi]:
                    sxi = table.index[sx]
                    check(tables.kl.get((sxi, wi), {}) == tables.kl[(xi, wi)],
                          "KL polynomials must be invariant under left descents")
    return count


def _cache_path(rd: RootDatum, e: int, max_length: int) -> Path | None:
    root = os.environ.get("GRKOSZUL_CACHE_DIR")
    if not root:
        return None
    key = "kl-v%d:%s%d:e=%d:L=%d" % (_TABLE_VERSION, rd.cartan_type, rd.rank,
                                     e, max_length)
    digest = hashlib.sha256(key.encode()).hexdigest()[:24]
    return Path(root) / ("kl_%s.json" % digest)


def _serialize_tables(tables: KlTables) -> dict:
    t = tables.table
    return {
        "version": _TABLE_VERSION,
        "cartan_type": t.datum.cartan_type,
        "rank": t.datum.rank,
        "e": t.e,
        "max_length": t.max_length,
        "elements": [
            [list(map(list, elem.finite_part)), list(elem.translation), elem.length,
             list(t.words[i]), sorted(t.left_descents[i]), sorted(t.right_descents[i]),
             sorted(t.lower_sets[i])]
            for i, elem in enumerate(t.elements)],
        "kl": [[xi, wi, sorted(map(list, poly.items()))]
               for (xi, wi), poly in sorted(tables.kl.items())],
        "inverse": [[xi, wi, sorted(map(list, poly.items()))]
                    for (xi, wi), poly in sorted(tables.inverse.items())],
        "intervals_verified": tables.intervals_verified,
    }


def _deserialize_tables(rd: RootDatum, payload: dict) -> KlTables:
    elements, words, left, right, lower = [], [], [], [], []
    for row in payload["elements"]:
        matrix = tuple(tuple(r) for r in row[0])
        elements.append(AffineWeylElement(matrix, tuple(row[1]), row[2]))
        words.append(tuple(row[3]))
        left.append(frozenset(row[4]))
        right.append(frozenset(row[5]))
        lower.append(frozenset(row[6]))
    table = CoxeterTable(
        datum=rd, e=payload["e"], max_length=payload["max_length"],
        elements=tuple(elements), words=tuple(words),
        left_descents=tuple(left), right_descents=tuple(right),
        lower_sets=tuple(lower))
    kl = {(xi, wi): {e: c for e, c in poly} for xi, wi, poly in payload["kl"]}
    inverse = {(xi, wi): {e: c for e, c in poly} for xi, wi, poly in payload["inverse"]}
    return KlTables(table=table, kl=kl, inverse=inverse,
                    intervals_verified=payload["intervals_verified"])


def load_or_build_tables(rd: RootDatum, e: int, max_length: int) -> KlTables:
    """Cached entry point; any unreadable cache file is rebuilt in place."""
    path = _cache_path(rd, e, max_length)
    if path is not None and path.exists():
        try:
            payload = json.loads(path.read_text())
            if payload.get("version") == _TABLE_VERSION:
                return _deserialize_tables(rd, payload)
        except (OSError, ValueError, KeyError, IndexError, TypeError):
            pass
    tables = kl_and_inverse_tables(coxeter_enumerate(rd, e, max_length))
    if path is not None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(_serialize_tables(tables), sort_keys=True,
                                      separators=(",", ":")))
            tmp.replace(path)
        except OSError:
            pass  # an unwritable cache never blocks the computation
    return tables


@dataclass
class WeightPolyReport:
    nu: Weight
    lam: Weight
    same_class: bool
    nu_length: int
    lam_length: int
    p_poly: LaurentPoly
    q_poly: LaurentPoly


def weight_polynomials(rd: RootDatum, e: int, nu: Weight, lam: Weight,
                       tables: KlTables | None = None) -> WeightPolyReport:
    """KL and inverse polynomials attached to a pair of weights: the pair of
    minimal carriers when both weights fold to the same antidominant
    representative, zero otherwise."""
    link_nu = linkage(rd, e, nu)
    link_lam = linkage(rd, e, lam)
    same = link_nu.lambda_minus == link_lam.lambda_minus
    if not same:
        return WeightPolyReport(nu=nu, lam=lam, same_class=False,
                                nu_length=link_nu.length, lam_length=link_lam.length,
                                p_poly=LaurentPoly.zero(), q_poly=LaurentPoly.zero())
    if tables is None:
        tables = load_or_build_tables(rd, e, max(link_nu.length, link_lam.length))
    return WeightPolyReport(
        nu=nu, lam=lam, same_class=True,
        nu_length=link_nu.length, lam_length=link_lam.length,
        p_poly=tables.kl_polynomial(link_nu.w, link_lam.w),
        q_poly=tables.inverse_polynomial(link_nu.w, link_lam.w))


@dataclass
class LayerPrediction:
    """Predicted radical-layer multiplicity table of a standard object.

    layers[n] lists (weight, multiplicity) pairs for layer n; layer 0 is
    always the weight itself with multiplicity 1.  For singular weights the
    same table is read through the translated semisimple-series semantics,
    flagged by singular.  polynomials records the inverse polynomial behind
    each support weight.
    """

    weight: Weight
    lambda_minus: Weight
    carrier_length: int
    singular: bool
    support: tuple[Weight, ...]
    layers: tuple[tuple[tuple[Weight, int], ...], ...]
    polynomials: tuple[tuple[Weight, LaurentPoly], ...]


def predict_layers(rd: RootDatum, e: int, lam: Weight,
                   gamma: WeightIdealSet | None = None,
                   tables: KlTables | None = None) -> LayerPrediction:
    """Predict layer multiplicities from inverse KL polynomials.

    The multiplicity of nu in layer n is the coefficient of
    t^(l(lam) - l(nu) - n) in the inverse polynomial of the minimal
    carriers.  Support weights are the dominant dot-images of elements
    Bruhat-below the carrier of lam; the sign-twisted reconstruction of the
    polynomial from the table is asserted equal to the inverse polynomial.
    """
    require(lam.is_dominant, "layer predictions are for dominant weights")
    link = linkage(rd, e, lam)
    if tables is None:
        tables = load_or_build_tables(rd, e, link.length)
    table = tables.table
    wi = table.index.get(link.w)
    require(wi is not None, "table length bound is too small for this weight")

    if gamma is not None:
        require(gamma.datum == rd and gamma.e == e,
                "ideal set must match the root datum and e")
        require(lam in gamma, "weight must belong to the supplied ideal")

    support: dict[tuple[int, ...], Weight] = {}
    for yi in table.lower_sets[wi]:
        nu = table.elements[yi].dot(rd, link.lambda_minus)
        if nu.is_dominant:
            support[nu.coordinates] = nu

    layer_maps: dict[int, dict[Weight, int]] = {}
    polynomials = []
    for coords in sorted(support):
        nu = support[coords]
        link_nu = linkage(rd, e, nu)
        check(link_nu.lambda_minus == link.lambda_minus,
              "support weights must share the antidominant representative")
        wni = table.index[link_nu.w]
        check(wni in table.lower_sets[wi],
              "minimal carriers of support weights must sit below the carrier")
        q_poly = _to_t_poly(tables.inverse.get((wni, wi), {}))
        polynomials.append((nu, q_poly))
        reconstruction: dict[int, int] = {}
        for exponent, coeff in q_poly.terms:
            n = link.length - link_nu.length - exponent
            check(n >= 0, "layer indices must be non-negative")
            check(coeff >= 0, "layer multiplicities must be non-negative")
            layer_maps.setdefault(n, {})[nu] = coeff
            sign = -1 if exponent % 2 else 1
            reconstruction[exponent] = sign * coeff
        check(LaurentPoly.from_dict(reconstruction) == q_poly,
              "sign-twisted layer reconstruction must reproduce the polynomial")
        if gamma is not None:
            check(nu in gamma, "closed ideals must contain the predicted support")

    depth = max(layer_maps) if layer_maps else 0
    layers = tuple(
        tuple(sorted(layer_maps.get(n, {}).items(), key=lambda kv: kv[0].coordinates))
        for n in range(depth + 1))
    check(layers[0] == ((lam, 1),), "layer 0 must be the weight itself, once")
    return LayerPrediction(
        weight=lam,
        lambda_minus=link.lambda_minus,
        carrier_length=link.length,
        singular=not link.regular,
        support=tuple(support[c] for c in sorted(support)),
        layers=layers,
        polynomials=tuple(polynomials),
    )


@dataclass
class CharacterVector:
    """Formal character, stored by dominant orbit representatives; values
    may be negative for virtual characters."""

    datum: RootDatum
    dominant_multiplicities: tuple[tuple[Weight, int], ...]

    def multiplicity(self, weight: Weight) -> int:
        rep = dominant_conjugate(self.datum, weight)
        for w, m in self.dominant_multiplicities:
            if w == rep:
                return m
        return 0

    @property
    def dimension(self) -> int:
        return sum(m * len(weyl_orbit(self.datum, w))
                   for w, m in self.dominant_multiplicities)


_character_cache: dict[tuple[str, int, tuple[int, ...]], CharacterVector] = {}


def weyl_character(rd: RootDatum, lam: Weight) -> CharacterVector:
    """Weight multiplicities of the Weyl character by Freudenthal's formula,
    cross-checked against the Weyl dimension product."""
    require(lam.is_dominant, "Weyl characters are indexed by dominant weights")
    key = (rd.cartan_type, rd.rank, lam.coordinates)
    cached = _character_cache.get(key)
    if cached is not None:
        return cached

    domain = _closure_set(rd, 1, [lam], False)
    order = sorted(domain, key=lambda w: (sum(rd.to_root_coords(w)), w.coordinates),
                   reverse=True)
    lam_rho = lam + rd.rho
    top_norm = rd.inner(lam_rho, lam_rho)
    root_weights = [rd.root_weight(root) for root in rd.positive_roots]
    mults: dict[tuple[int, ...], int] = {lam.coordinates: 1}
    for mu in order:
        if mu == lam:
            continue
        total = Fraction(0)
        for alpha in root_weights:
            k = 1
            while True:
                shifted = Weight(tuple(m + k * a for m, a in
                                       zip(mu.coordinates, alpha.coordinates)))
                rep = dominant_conjugate(rd, shifted)
                m_up = mults.get(rep.coordinates)
                if m_up is None:
                    break
                total += m_up * rd.inner(shifted, alpha)
                k += 1
        mu_rho = mu + rd.rho
        denom = top_norm - rd.inner(mu_rho, mu_rho)
        check(denom > 0, "Freudenthal denominator must be positive below the top")
        value = 2 * total / denom
        check(value.denominator == 1 and value > 0,
              "weight multiplicities must be positive integers")
        mults[mu.coordinates] = int(value)

    vector = CharacterVector(
        datum=rd,
        dominant_multiplicities=tuple(sorted(
            ((Weight(c), m) for c, m in mults.items()),
            key=lambda kv: kv[0].coordinates)))
    expected = Fraction(1)
    for root in rd.positive_roots:
        expected *= Fraction(rd.pairing(lam_rho, root), rd.pairing(rd.rho, root))
    check(vector.dimension == expected,
          "Freudenthal dimension must match the Weyl product formula")
    _character_cache[key] = vector
    return vector


@dataclass
class LcfReport:
    """Alternating character formula output.

    terms lists (dominant dot-image, sign, KL value at 1) for the carrier
    elements whose dot-image is dominant; character is the resulting virtual
    character, with any negative orbit multiplicities surfaced (never
    clamped) in negative_entries.
    """

    weight: Weight
    lambda_minus: Weight
    carrier_length: int
    singular: bool
    terms: tuple[tuple[Weight, int, int], ...]
    character: CharacterVector
    dimension: int
    non_negative: bool
    negative_entries: tuple[tuple[Weight, int], ...]


def lcf_character(rd: RootDatum, e: int, lam: Weight,
                  tables: KlTables | None = None) -> LcfReport:
    """Alternating sum of Weyl characters against KL values at 1 over the
    elements below the carrier with dominant dot-image."""
    require(lam.is_dominant, "the character formula is for dominant weights")
    link = linkage(rd, e, lam)
    if tables is None:
        tables = load_or_build_tables(rd, e, link.length)
    table = tables.table
    wi = table.index.get(link.w)
    require(wi is not None, "table length bound is too small for this weight")

    terms = []
    combined: dict[tuple[int, ...], int] = {}
    for yi in sorted(table.lower_sets[wi],
                     key=lambda i: (table.elements[i].length, i)):
        nu = table.elements[yi].dot(rd, link.lambda_minus)
        if not nu.is_dominant:
            continue
        sign = -1 if (link.length - table.elements[yi].length) % 2 else 1
        value = sum(tables.kl[(yi, wi)].values())
        terms.append((nu, sign, value))
        for mu, m in weyl_character(rd, nu).dominant_multiplicities:
            coords = mu.coordinates
            combined[coords] = combined.get(coords, 0) + sign * value * m

    character = CharacterVector(
        datum=rd,
        dominant_multiplicities=tuple(sorted(
            ((Weight(c), m) for c, m in combined.items() if m != 0),
            key=lambda kv: kv[0].coordinates)))
    negative = tuple((w, m) for w, m in character.dominant_multiplicities if m < 0)
    return LcfReport(
        weight=lam,
        lambda_minus=link.lambda_minus,
        carrier_length=link.length,
        singular=not link.regular,
        terms=tuple(terms),
        character=character,
        dimension=character.dimension,
        non_negative=not negative,
        negative_entries=negative,
    )
