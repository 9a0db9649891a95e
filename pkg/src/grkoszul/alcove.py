"""Root data and affine Weyl combinatorics on the weight lattice.

Conventions.  Weights carry integer coordinates in the fundamental-weight
basis, so dominance of a single weight is coordinatewise non-negativity,
while the order relation "mu <= lam iff lam - mu is a non-negative integral
combination of simple roots" goes through the inverse Cartan matrix.  The
Cartan matrix is stored with cartan[i][j] equal to the pairing of the j-th
simple root against the i-th simple coroot; column j therefore holds the
fundamental-weight coordinates of the j-th simple root.  Short roots are
normalised to squared length 2.

The affine Weyl group W ltimes eZPhi acts on the rho-shifted space: an
element is a pair (matrix, translation) sending x to matrix*x + translation,
and its dot action on a weight is lam -> element(lam + rho) - rho.  The base
cell is the antidominant one, bounded by the walls (x, alpha_i^v) = 0 for
simple alpha_i and (x, alpha_0^v) = -e for the maximal short root alpha_0;
lengths are counts of arrangement hyperplanes (x, alpha^v) = e*m strictly
separating a point from the interior of the base cell.  All arithmetic is
exact (integers and Fractions).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as iter_product
from math import ceil, floor

from .errors import InputFormatError, check, require


@dataclass(frozen=True)
class Weight:
    """Integer vector in the fundamental-weight basis.

    Instances are immutable and hashable; arithmetic stays in the weight
    lattice.  Sorting for deterministic output uses the coordinate tuple
    explicitly (never a comparison operator, which could be mistaken for
    the dominance order).
    """

    coordinates: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(self.coordinates)
        for c in coords:
            if not isinstance(c, int):
                raise InputFormatError(f"weight coordinates must be integers, got {c!r}")
        object.__setattr__(self, "coordinates", coords)

    @property
    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coordinates)

    def __add__(self, other: "Weight") -> "Weight":
        require(len(self.coordinates) == len(other.coordinates), "rank mismatch")
        return Weight(tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def __sub__(self, other: "Weight") -> "Weight":
        require(len(self.coordinates) == len(other.coordinates), "rank mismatch")
        return Weight(tuple(a - b for a, b in zip(self.coordinates, other.coordinates)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coordinates))

    def __mul__(self, scalar: int) -> "Weight":
        require(isinstance(scalar, int), "weights scale by integers only")
        return Weight(tuple(scalar * a for a in self.coordinates))

    __rmul__ = __mul__


def _chain_cartan(rank: int) -> list[list[int]]:
    cartan = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i in range(rank - 1):
        cartan[i][i + 1] = -1
        cartan[i + 1][i] = -1
    return cartan


def _cartan_data(cartan_type: str, rank: int) -> tuple[list[list[int]], list[int]]:
    """Cartan matrix and symmetrizer (half squared lengths, short = 1)."""
    if cartan_type == "A" and rank >= 1:
        return _chain_cartan(rank), [1] * rank
    if cartan_type == "B" and rank >= 2:
        cartan = _chain_cartan(rank)
        cartan[rank - 1][rank - 2] = -2
        return cartan, [2] * (rank - 1) + [1]
    if cartan_type == "C" and rank >= 2:
        cartan = _chain_cartan(rank)
        cartan[rank - 2][rank - 1] = -2
        return cartan, [1] * (rank - 1) + [2]
    if cartan_type == "D" and rank >= 4:
        cartan = _chain_cartan(rank)
        # Fork: the last node hangs off node rank-3 instead of rank-2.
        cartan[rank - 1][rank - 2] = 0
        cartan[rank - 2][rank - 1] = 0
        cartan[rank - 1][rank - 3] = -1
        cartan[rank - 3][rank - 1] = -1
        return cartan, [1] * rank
    if cartan_type == "E" and rank in (6, 7, 8):
        cartan = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
        if rank >= 7:
            edges.append((5, 6))
        if rank == 8:
            edges.append((6, 7))
        for i, j in edges:
            cartan[i][j] = -1
            cartan[j][i] = -1
        return cartan, [1] * rank
    if cartan_type == "F" and rank == 4:
        cartan = _chain_cartan(4)
        cartan[2][1] = -2
        return cartan, [2, 2, 1, 1]
    if cartan_type == "G" and rank == 2:
        return [[2, -3], [-1, 2]], [1, 3]
    raise InputFormatError(f"unsupported Cartan type {cartan_type}{rank}")


def _root_string_neighbors(cartan: list[list[int]], roots: set[tuple[int, ...]],
                           beta: tuple[int, ...], i: int) -> bool:
    """Whether beta + alpha_i is a root, by the root-string count q = p - pairing."""
    rank = len(cartan)
    pairing = sum(beta[j] * cartan[i][j] for j in range(rank))
    down = list(beta)
    p = 0
    while True:
        down[i] -= 1
        if tuple(down) in roots:
            p += 1
        else:
            break
    return p - pairing >= 1


def _positive_roots(cartan: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    rank = len(cartan)
    simples = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    roots: set[tuple[int, ...]] = set(simples)
    frontier = list(simples)
    while frontier:
        grown: list[tuple[int, ...]] = []
        for beta in frontier:
            for i in range(rank):
                if _root_string_neighbors(cartan, roots, beta, i):
                    up = list(beta)
                    up[i] += 1
                    candidate = tuple(up)
                    if candidate not in roots:
                        roots.add(candidate)
                        grown.append(candidate)
        frontier = grown
    return tuple(sorted(roots, key=lambda r: (sum(r), r)))


def _fraction_inverse(matrix: list[list[int]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(matrix)
    work = [[Fraction(matrix[i][j]) for j in range(n)]
            + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if work[r][col] != 0)
        work[col], work[pivot] = work[pivot], work[col]
        scale = work[col][col]
        work[col] = [x / scale for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


@dataclass(frozen=True)
class RootDatum:
    """Irreducible root datum with all derived constants precomputed.

    positive_roots and max_short_root are in simple-root coordinates;
    fundamental_weights holds each such weight in simple-root coordinates
    (column of the inverse Cartan matrix); w0_matrix acts on
    fundamental-weight coordinates.
    """

    cartan_type: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[int, ...]
    positive_roots: tuple[tuple[int, ...], ...]
    fundamental_weights: tuple[tuple[Fraction, ...], ...]
    rho: Weight
    coxeter_number: int
    max_short_root: tuple[int, ...]
    w0_matrix: tuple[tuple[int, ...], ...]

    @cached_property
    def inverse_cartan(self) -> tuple[tuple[Fraction, ...], ...]:
        return _fraction_inverse([list(row) for row in self.cartan])

    @cached_property
    def _coroot_table(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        return {root: self._coroot(root) for root in self.positive_roots}

    def root_norm(self, root: tuple[int, ...]) -> int:
        total = 0
        for i in range(self.rank):
            if root[i] == 0:
                continue
            for j in range(self.rank):
                total += root[i] * root[j] * self.symmetrizer[i] * self.cartan[i][j]
        return total

    def _coroot(self, root: tuple[int, ...]) -> tuple[int, ...]:
        norm = self.root_norm(root)
        coords = []
        for j in range(self.rank):
            num = 2 * root[j] * self.symmetrizer[j]
            check(num % norm == 0, "coroot coordinates must be integral")
            coords.append(num // norm)
        return tuple(coords)

    def coroot(self, root: tuple[int, ...]) -> tuple[int, ...]:
        cached = self._coroot_table.get(root)
        return cached if cached is not None else self._coroot(root)

    def pairing(self, weight: Weight, root: tuple[int, ...]) -> int:
        cv = self.coroot(root)
        return sum(c * x for c, x in zip(cv, weight.coordinates))

    def shifted_pairing(self, point: tuple, root: tuple[int, ...]):
        cv = self.coroot(root)
        return sum(c * x for c, x in zip(cv, point))

    def root_weight(self, root: tuple[int, ...]) -> Weight:
        coords = tuple(sum(self.cartan[k][j] * root[j] for j in range(self.rank))
                       for k in range(self.rank))
        return Weight(coords)

    def simple_root(self, i: int) -> Weight:
        require(0 <= i < self.rank, "simple root index out of range")
        return Weight(tuple(self.cartan[k][i] for k in range(self.rank)))

    def to_root_coords(self, weight: Weight) -> tuple[Fraction, ...]:
        inv = self.inverse_cartan
        return tuple(sum(inv[i][k] * weight.coordinates[k] for k in range(self.rank))
                     for i in range(self.rank))

    def inner(self, a: Weight, b: Weight) -> Fraction:
        ca = self.to_root_coords(a)
        cb = self.to_root_coords(b)
        total = Fraction(0)
        for i in range(self.rank):
            if ca[i] == 0:
                continue
            for j in range(self.rank):
                total += ca[i] * cb[j] * self.symmetrizer[i] * self.cartan[i][j]
        return total

    def w0(self, weight: Weight) -> Weight:
        return Weight(tuple(sum(row[j] * weight.coordinates[j] for j in range(self.rank))
                            for row in self.w0_matrix))

    def star(self, weight: Weight) -> Weight:
        return -self.w0(weight)


def _simple_reflection_matrix(cartan: tuple[tuple[int, ...], ...], i: int) -> list[list[int]]:
    rank = len(cartan)
    mat = [[1 if r == c else 0 for c in range(rank)] for r in range(rank)]
    for k in range(rank):
        mat[k][i] -= cartan[k][i]
    return mat


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def _mat_vec(m, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def _identity_matrix(rank: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))


def root_datum_build(cartan_type: str, rank: int) -> RootDatum:
    """Build the root datum for an irreducible Cartan type.

    Supported: A (rank >= 1), B and C (rank >= 2), D (rank >= 4),
    E (rank 6, 7, 8), F (rank 4), G (rank 2).  Anything else is an input
    error.  Derived data are validated on the spot: symmetrizability,
    closure of the positive roots under root strings, the maximal short
    root dominating every short root, and the longest-element matrix
    squaring to the identity and negating rho.
    """
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise InputFormatError("rank must be an integer")
    cartan_list, symmetrizer = _cartan_data(cartan_type, rank)
    for i in range(rank):
        for j in range(rank):
            check(symmetrizer[i] * cartan_list[i][j] == symmetrizer[j] * cartan_list[j][i],
                  "Cartan matrix must be symmetrizable")
    cartan = tuple(tuple(row) for row in cartan_list)
    roots = _positive_roots(cartan_list)
    root_set = set(roots)
    for beta in roots:
        for i in range(rank):
            up = list(beta)
            up[i] += 1
            in_set = tuple(up) in root_set
            check(in_set == _root_string_neighbors(cartan_list, root_set, beta, i),
                  "positive roots must be closed under root strings")

    inv = _fraction_inverse(cartan_list)
    fundamental = tuple(tuple(inv[i][k] for i in range(rank)) for k in range(rank))
    rho = Weight((1,) * rank)

    datum = RootDatum(
        cartan_type=cartan_type,
        rank=rank,
        cartan=cartan,
        symmetrizer=tuple(symmetrizer),
        positive_roots=roots,
        fundamental_weights=fundamental,
        rho=rho,
        coxeter_number=0,
        max_short_root=(0,) * rank,
        w0_matrix=_identity_matrix(rank),
    )

    norms = [datum.root_norm(r) for r in roots]
    check(min(norms) == 2, "short roots must be normalised to squared length 2")
    shorts = [r for r, nm in zip(roots, norms) if nm == 2]
    alpha0 = tuple(max(r[j] for r in shorts) for j in range(rank))
    check(alpha0 in root_set, "coordinatewise maximum of short roots must be a root")
    for r in shorts:
        check(all(a >= b for a, b in zip(alpha0, r)),
              "maximal short root must dominate all short roots")
    object.__setattr__(datum, "max_short_root", alpha0)
    object.__setattr__(datum, "coxeter_number", datum.pairing(rho, alpha0) + 1)

    # rho really is the sum of the fundamental weights, in both bases.
    rho_roots = datum.to_root_coords(rho)
    for i in range(rank):
        check(rho_roots[i] == sum(fundamental[k][i] for k in range(rank)),
              "rho must equal the sum of the fundamental weights")

    # Longest element: fold rho to the antidominant chamber, composing the
    # simple reflections; the walk crosses each positive wall exactly once.
    point = list(rho.coordinates)
    w0 = _identity_matrix(rank)
    for _ in range(len(roots) + 1):
        i = next((k for k in range(rank) if point[k] > 0), None)
        if i is None:
            break
        refl = tuple(tuple(row) for row in _simple_reflection_matrix(cartan, i))
        point = list(_mat_vec(refl, point))
        w0 = _mat_mul(refl, w0)
    check(all(c <= 0 for c in point), "longest-element fold must terminate")
    check(_mat_mul(w0, w0) == _identity_matrix(rank), "w0 must be an involution")
    check(_mat_vec(w0, rho.coordinates) == tuple(-1 for _ in range(rank)),
          "w0 must negate rho")
    object.__setattr__(datum, "w0_matrix", w0)
    return datum


def dominance_leq(rd: RootDatum, lower: Weight, upper: Weight) -> bool:
    """Whether lower <= upper: the difference is in Z>=0 . simple roots."""
    diff = upper - lower
    coords = rd.to_root_coords(diff)
    return all(c.denominator == 1 and c >= 0 for c in coords)


def dominant_conjugate(rd: RootDatum, weight: Weight) -> Weight:
    """The dominant representative of the finite Weyl group orbit."""
    point = list(weight.coordinates)
    for _ in range(len(rd.positive_roots) + 1):
        i = next((k for k in range(rd.rank) if point[k] < 0), None)
        if i is None:
            return Weight(tuple(point))
        coeff = point[i]
        for k in range(rd.rank):
            point[k] -= coeff * rd.cartan[k][i]
    check(False, "dominant fold must terminate within the length of w0")


def weyl_orbit(rd: RootDatum, weight: Weight) -> tuple[Weight, ...]:
    """The finite Weyl group orbit, sorted by coordinates."""
    seen = {weight.coordinates}
    frontier = [weight.coordinates]
    while frontier:
        grown = []
        for v in frontier:
            for i in range(rd.rank):
                image = tuple(v[k] - v[i] * rd.cartan[k][i] for k in range(rd.rank))
                if image not in seen:
                    seen.add(image)
                    grown.append(image)
        frontier = grown
    return tuple(Weight(v) for v in sorted(seen))


def is_regular(rd: RootDatum, e: int, weight: Weight) -> bool:
    """e-regularity: no pairing of weight + rho with a coroot is divisible by e."""
    require(e >= 1, "e must be a positive integer")
    shifted = weight + rd.rho
    return all(rd.pairing(shifted, root) % e != 0 for root in rd.positive_roots)


@dataclass
class WeightReport:
    weight: Weight
    dominant: bool
    regular: bool
    restricted: bool
    restricted_part: Weight
    quotient_part: Weight
    star: Weight


def dominance_and_regularity(rd: RootDatum, e: int, weight: Weight) -> WeightReport:
    """Flags and the e-adic decomposition weight = restricted + e * quotient.

    The restricted part always has coordinates in [0, e); the quotient part
    is dominant exactly when the weight is.  The star involution is
    lam -> -w0(lam).
    """
    require(e >= 1, "e must be a positive integer")
    coords = weight.coordinates
    restricted_part = Weight(tuple(c % e for c in coords))
    quotient_part = Weight(tuple((c - c % e) // e for c in coords))
    dominant = weight.is_dominant
    return WeightReport(
        weight=weight,
        dominant=dominant,
        regular=is_regular(rd, e, weight),
        restricted=dominant and all(c < e for c in coords),
        restricted_part=restricted_part,
        quotient_part=quotient_part,
        star=rd.star(weight),
    )


def base_interior_point(rd: RootDatum, e: int) -> tuple[Fraction, ...]:
    """A rho-shifted point interior to the base (antidominant) cell."""
    return tuple(Fraction(-e, rd.coxeter_number) for _ in range(rd.rank))


def _multiples_strictly_between(lo, hi, e: int) -> int:
    if lo > hi:
        lo, hi = hi, lo
    first = floor(Fraction(lo, e)) + 1
    last = ceil(Fraction(hi, e)) - 1
    return max(0, last - first + 1)


def hyperplane_length(rd: RootDatum, e: int,
                      finite_part: tuple[tuple[int, ...], ...],
                      translation: tuple[int, ...]) -> int:
    """Number of hyperplanes (x, alpha^v) = e*m separating the base cell
    from its image under x -> finite_part*x + translation."""
    require(e >= 1, "e must be a positive integer")
    u = base_interior_point(rd, e)
    v = tuple(x + t for x, t in zip(_mat_vec(finite_part, u), translation))
    total = 0
    for root in rd.positive_roots:
        total += _multiples_strictly_between(rd.shifted_pairing(u, root),
                                             rd.shifted_pairing(v, root), e)
    return total


@dataclass(frozen=True)
class AffineWeylElement:
    """Element of W ltimes eZPhi as x -> finite_part*x + translation on the
    rho-shifted space, with its hyperplane-count length cached."""

    finite_part: tuple[tuple[int, ...], ...]
    translation: tuple[int, ...]
    length: int

    def apply_shifted(self, point: tuple) -> tuple:
        return tuple(x + t for x, t in zip(_mat_vec(self.finite_part, point),
                                           self.translation))

    def dot(self, rd: RootDatum, weight: Weight) -> Weight:
        shifted = tuple(c + 1 for c in weight.coordinates)
        image = self.apply_shifted(shifted)
        return Weight(tuple(x - 1 for x in image))

    def separation_length(self, rd: RootDatum, e: int) -> int:
        """Recount the separating hyperplanes and assert the cached length."""
        t_coords = rd.to_root_coords(Weight(self.translation))
        require(all(c.denominator == 1 and c % e == 0 for c in t_coords),
                "translation must lie in e times the root lattice")
        count = hyperplane_length(rd, e, self.finite_part, self.translation)
        check(count == self.length, "cached length must match the hyperplane count")
        return count


def identity_element(rank: int) -> AffineWeylElement:
    return AffineWeylElement(_identity_matrix(rank), (0,) * rank, 0)


def wall_reflections(rd: RootDatum, e: int) -> tuple[AffineWeylElement, ...]:
    """Reflections in the walls of the base cell: the rank simple walls,
    then the affine wall (x, alpha_0^v) = -e.  Each has length 1."""
    require(e >= 1, "e must be a positive integer")
    rank = rd.rank
    out = []
    for i in range(rank):
        mat = tuple(tuple(row) for row in _simple_reflection_matrix(rd.cartan, i))
        out.append(AffineWeylElement(mat, (0,) * rank, 1))
    alpha0 = rd.root_weight(rd.max_short_root).coordinates
    cv = rd.coroot(rd.max_short_root)
    mat = tuple(tuple((1 if k == j else 0) - alpha0[k] * cv[j] for j in range(rank))
                for k in range(rank))
    out.append(AffineWeylElement(mat, tuple(-e * a for a in alpha0), 1))
    return tuple(out)


def compose(rd: RootDatum, e: int, a: AffineWeylElement,
            b: AffineWeylElement) -> AffineWeylElement:
    """a after b, with the length recomputed from hyperplane counts."""
    mat = _mat_mul(a.finite_part, b.finite_part)
    trans = tuple(x + t for x, t in zip(_mat_vec(a.finite_part, b.translation),
                                        a.translation))
    return AffineWeylElement(mat, trans, hyperplane_length(rd, e, mat, trans))


def element_inverse(rd: RootDatum, e: int, a: AffineWeylElement) -> AffineWeylElement:
    inv_rows = _fraction_inverse([list(row) for row in a.finite_part])
    mat = []
    for row in inv_rows:
        for x in row:
            check(x.denominator == 1, "finite part must be integrally invertible")
        mat.append(tuple(int(x) for x in row))
    mat = tuple(mat)
    trans = tuple(-x for x in _mat_vec(mat, a.translation))
    return AffineWeylElement(mat, trans, hyperplane_length(rd, e, mat, trans))


@dataclass
class LinkageResult:
    """Antidominant representative and minimal carrier of a weight.

    w is the minimal-length element with w . lambda_minus = weight (minimal
    coset representative when the weight is singular); length is its
    hyperplane count; depth is the total hyperplane depth sum over positive
    roots (None for singular weights, where the defining strict inequalities
    fail); facet lists the arrangement hyperplanes (root, m) containing
    weight + rho, empty exactly when the weight is e-regular.
    """

    weight: Weight
    lambda_minus: Weight
    w: AffineWeylElement
    length: int
    depth: int | None
    regular: bool
    facet: tuple[tuple[tuple[int, ...], int], ...]


def linkage(rd: RootDatum, e: int, weight: Weight) -> LinkageResult:
    """Fold a weight into the closed antidominant cell under the dot action.

    The fold reflects through strictly violated walls of the base cell only,
    so it crosses each strictly separating hyperplane exactly once; the
    accumulated element is therefore minimal in its coset even on a facet.
    """
    require(e >= 1, "e must be a positive integer")
    rank = rd.rank
    shifted = tuple(c + 1 for c in weight.coordinates)

    facet = []
    for root in rd.positive_roots:
        value = rd.shifted_pairing(shifted, root)
        if value % e == 0:
            facet.append((root, value // e))
    facet.sort()
    regular = not facet

    u = base_interior_point(rd, e)
    strict = 0
    for root in rd.positive_roots:
        strict += _multiples_strictly_between(rd.shifted_pairing(u, root),
                                              rd.shifted_pairing(shifted, root), e)

    walls = wall_reflections(rd, e)
    alpha0 = rd.max_short_root
    point = shifted
    w_mat = _identity_matrix(rank)
    w_trans = (0,) * rank
    steps = 0
    for _ in range(strict + 1):
        i = next((k for k in range(rank) if point[k] > 0), None)
        if i is not None:
            refl = walls[i]
        elif rd.shifted_pairing(point, alpha0) < -e:
            refl = walls[rank]
        else:
            break
        point = refl.apply_shifted(point)
        # w = w o refl accumulates the inverse of the fold (reflections are
        # involutions), so w carries lambda_minus back to the weight.
        w_trans = tuple(x + t for x, t in zip(_mat_vec(w_mat, refl.translation), w_trans))
        w_mat = _mat_mul(w_mat, refl.finite_part)
        steps += 1
    check(all(c <= 0 for c in point), "fold must land in the closed base cell")
    check(rd.shifted_pairing(point, alpha0) >= -e, "fold must land in the closed base cell")
    check(steps == strict, "fold must cross each strict separator exactly once")

    lambda_minus = Weight(tuple(c - 1 for c in point))
    w = AffineWeylElement(w_mat, w_trans, strict)
    check(w.dot(rd, lambda_minus) == weight, "carrier must map the representative back")

    depth = None
    if regular:
        depth = 0
        for root in rd.positive_roots:
            value = rd.shifted_pairing(shifted, root)
            depth += floor(Fraction(value, e))
    return LinkageResult(
        weight=weight,
        lambda_minus=lambda_minus,
        w=w,
        length=strict,
        depth=depth,
        regular=regular,
        facet=tuple(facet),
    )


def _closure_set(rd: RootDatum, e: int, generators, regular_only: bool) -> tuple[Weight, ...]:
    """All dominant weights below a generator: breadth-first subtraction of
    simple roots, pruning states with a negative simple-root coordinate
    (every path to a dominant weight keeps those coordinates non-negative)."""
    seen: set[tuple[int, ...]] = set()
    frontier: list[tuple[tuple[int, ...], tuple[Fraction, ...]]] = []
    for gen in generators:
        if not gen.is_dominant:
            raise InputFormatError(f"ideal generators must be dominant, got {gen.coordinates}")
        if gen.coordinates not in seen:
            seen.add(gen.coordinates)
            frontier.append((gen.coordinates, rd.to_root_coords(gen)))
    while frontier:
        grown = []
        for v, c in frontier:
            for i in range(rd.rank):
                if c[i] < 1:
                    continue
                image = tuple(v[k] - rd.cartan[k][i] for k in range(rd.rank))
                if image in seen:
                    continue
                seen.add(image)
                grown.append((image, tuple(x - (1 if k == i else 0)
                                           for k, x in enumerate(c))))
        frontier = grown
    collected = [Weight(v) for v in seen if all(x >= 0 for x in v)]
    if regular_only:
        collected = [w for w in collected if is_regular(rd, e, w)]
    return tuple(sorted(collected, key=lambda w: w.coordinates))


@dataclass(frozen=True)
class WeightIdealSet:
    """Explicit finite set of dominant weights for one root datum and one e.

    regular_only marks sets living inside the e-regular weights (order
    ideals are then taken within that universe).  The closed flag claims
    downward closure and is verified on construction.
    """

    datum: RootDatum
    e: int
    weights: tuple[Weight, ...]
    closed: bool
    regular_only: bool = False

    def __post_init__(self) -> None:
        require(self.e >= 1, "e must be a positive integer")
        normalized = tuple(sorted(set(self.weights), key=lambda w: w.coordinates))
        object.__setattr__(self, "weights", normalized)
        for w in normalized:
            if not w.is_dominant:
                raise InputFormatError(f"weights must be dominant, got {w.coordinates}")
            if self.regular_only and not is_regular(self.datum, self.e, w):
                raise InputFormatError(
                    f"weight {w.coordinates} is singular in a regular-only set")
        if self.closed:
            closure = _closure_set(self.datum, self.e, normalized, self.regular_only)
            if closure != normalized:
                missing = sorted(set(closure) - set(normalized), key=lambda w: w.coordinates)
                raise InputFormatError(
                    f"set marked closed is not an order ideal; missing {[w.coordinates for w in missing]}")

    @cached_property
    def _index(self) -> frozenset:
        return frozenset(self.weights)

    def __contains__(self, weight: Weight) -> bool:
        return weight in self._index

    def __len__(self) -> int:
        return len(self.weights)


def ideal_closure(rd: RootDatum, e: int, generators,
                  regular_only: bool = False) -> WeightIdealSet:
    """The order ideal generated by the given dominant weights."""
    weights = _closure_set(rd, e, generators, regular_only)
    return WeightIdealSet(rd, e, weights, closed=True, regular_only=regular_only)


def restricted_weights(rd: RootDatum, e: int) -> tuple[Weight, ...]:
    """The e-restricted box: all coordinates in [0, e)."""
    require(e >= 1, "e must be a positive integer")
    return tuple(Weight(v) for v in iter_product(range(e), repeat=rd.rank))


def gamma_res(rd: RootDatum, e: int) -> WeightIdealSet:
    """Order ideal generated by the e-restricted weights."""
    return ideal_closure(rd, e, restricted_weights(rd, e))


def gamma_res_reg(rd: RootDatum, e: int) -> WeightIdealSet:
    """e-regular members of the restricted-generated ideal, as an ideal in
    the regular universe."""
    return ideal_closure(rd, e, restricted_weights(rd, e), regular_only=True)


def jantzen_region(rd: RootDatum, p: int) -> WeightIdealSet:
    """Dominant weights with (x + rho, alpha_0^v) <= p(p - h + 2)."""
    require(p >= 1, "p must be a positive integer")
    bound = p * (p - rd.coxeter_number + 2)
    cv = rd.coroot(rd.max_short_root)
    rho_pairing = sum(cv)
    if bound < rho_pairing:
        return WeightIdealSet(rd, p, (), closed=True)
    ranges = [range((bound - rho_pairing) // cv[i] + 1) for i in range(rd.rank)]
    weights = [Weight(v) for v in iter_product(*ranges)
               if sum((x + 1) * c for x, c in zip(v, cv)) <= bound]
    return WeightIdealSet(rd, p, tuple(weights), closed=True)


def fe_image(rd: RootDatum, e: int, xi: Weight) -> Weight:
    """The fattening map: 2(e-1)rho + w0(restricted part) + e * quotient part."""
    require(e >= 1, "e must be a positive integer")
    require(xi.is_dominant, "the fattening map takes dominant weights")
    xi0 = Weight(tuple(c % e for c in xi.coordinates))
    xi1 = Weight(tuple((c - c % e) // e for c in xi.coordinates))
    image = 2 * (e - 1) * rd.rho + rd.w0(xi0) + e * xi1
    check(image.is_dominant, "fattening image must be dominant")
    return image


def a1_value(rd: RootDatum, e: int, weights) -> int:
    """max over the set of the pairing of the e-adic quotient part against
    the maximal short coroot."""
    alpha0 = rd.max_short_root
    best = None
    for w in weights:
        quotient = Weight(tuple((c - c % e) // e for c in w.coordinates))
        value = rd.pairing(quotient, alpha0)
        best = value if best is None else max(best, value)
    require(best is not None, "a1 of an empty set is undefined")
    return best


@dataclass
class FattenReport:
    """stages[k] is the k-1 times fattened ideal (stages[0] is the plain
    closure of the input); a1_values aligns with stages.  The two fatness
    verdicts judge the final stage: literal membership of the shifted
    regular restricted weights, and membership of their fattening images.
    Passing n = -1 therefore judges the input ideal itself."""

    stages: tuple[WeightIdealSet, ...]
    a1_values: tuple[int, ...]
    efat_literal: bool
    efat_operational: bool


def fatten(rd: RootDatum, e: int, psi: WeightIdealSet, n: int) -> FattenReport:
    """Iterated fattening: stage -1 is the ideal closure of psi, stage k the
    ideal generated by the fattening images of stage k-1."""
    require(n >= -1, "fattening depth must be at least -1")
    require(psi.datum == rd and psi.e == e, "ideal set must match the root datum and e")
    require(len(psi.weights) > 0, "fattening is defined for nonempty sets")
    stage = ideal_closure(rd, e, psi.weights, psi.regular_only)
    stages = [stage]
    for _ in range(n + 1):
        gens = []
        for xi in stage.weights:
            image = fe_image(rd, e, xi)
            if is_regular(rd, e, xi):
                check(is_regular(rd, e, image),
                      "fattening must preserve e-regularity")
            gens.append(image)
        stage = ideal_closure(rd, e, gens, psi.regular_only)
        stages.append(stage)

    final = stages[-1]
    shift = (e - 1) * rd.rho
    reference = gamma_res_reg(rd, e)
    literal = all((lam + shift) in final for lam in reference.weights)
    operational = all(fe_image(rd, e, lam) in final for lam in reference.weights)
    return FattenReport(
        stages=tuple(stages),
        a1_values=tuple(a1_value(rd, e, s.weights) for s in stages),
        efat_literal=literal,
        efat_operational=operational,
    )


@dataclass
class BoundsReport:
    """Numerical bound battery for one ideal at one prime.

    a1_values[m + 1] is a1 of the m times fattened ideal, m = -1 .. m_max.
    growth_rows hold (m, a1(m), a1(-1) + 2(m+1)(h-1)); the inequality is
    asserted (strict for m >= 0).  threshold_rows hold
    (m, a1(m), (2m+3)(h-1), holds); it is asserted only when the ideal sits
    inside the restricted-generated ideal, where it is a theorem.
    pair_rows hold (m, hypothesis p >= (2m+3)(h-1), a1(m-1) + a1(m),
    2p - 2h + 2, holds).
    """

    prime: int
    coxeter_number: int
    jantzen_bound: int
    jantzen_membership: tuple[tuple[Weight, bool], ...]
    a1_values: tuple[int, ...]
    ext_vanishing: tuple[int, int, bool]
    cover_condition: tuple[int, int, bool]
    depth_values: tuple[tuple[Weight, int], ...]
    max_depth: int | None
    global_dim_bound: int | None
    growth_rows: tuple[tuple[int, int, int, bool], ...]
    threshold_rows: tuple[tuple[int, int, int, bool], ...]
    pair_rows: tuple[tuple[int, bool, int, int, bool], ...]
    restricted_subset: bool
    thresholds: tuple[tuple[str, int | None], ...]
    supplied_n: int | None


def bounds_report(rd: RootDatum, p: int, gamma: WeightIdealSet, m_max: int = 0,
                  supplied_n: int | None = None) -> BoundsReport:
    """Evaluate the whole numerical bound battery on one weight ideal.

    All quantities are computed on the ideal closure of gamma.  The Jantzen
    bound is p(p - h + 2) on (x + rho, alpha_0^v); the extension-vanishing
    condition is a1 < p - h + 1 and the cover condition
    a1 + a1(0) < 2p - 2h + 2; the global dimension bound is twice the
    maximal hyperplane depth over the e-regular members.
    """
    require(p >= 1, "p must be a positive integer")
    require(m_max >= 0, "m_max must be non-negative")
    require(gamma.datum == rd and gamma.e == p, "ideal set must match the root datum and p")
    h = rd.coxeter_number

    fattened = fatten(rd, p, gamma, m_max)
    base = fattened.stages[0]
    a1s = fattened.a1_values

    jantzen_bound = p * (p - h + 2)
    membership = tuple((w, rd.pairing(w + rd.rho, rd.max_short_root) <= jantzen_bound)
                       for w in base.weights)

    ext_lhs = a1s[0]
    ext_rhs = p - h + 1
    cover_lhs = a1s[0] + a1s[1]
    cover_rhs = 2 * p - 2 * h + 2

    depth_values = []
    for w in base.weights:
        link = linkage(rd, p, w)
        if link.regular:
            depth_values.append((w, link.depth))
    max_depth = max((d for _, d in depth_values), default=None)
    global_dim_bound = None if max_depth is None else 2 * max_depth

    growth_rows = []
    for m in range(0, m_max + 1):
        lhs = a1s[m + 1]
        rhs = a1s[0] + 2 * (m + 1) * (h - 1)
        ok = lhs < rhs
        check(ok, f"fattening growth bound must be strict at m={m}")
        growth_rows.append((m, lhs, rhs, ok))

    res_ideal = gamma_res(rd, p)
    restricted_subset = all(w in res_ideal for w in base.weights)
    threshold_rows = []
    for m in range(-1, m_max + 1):
        lhs = a1s[m + 1]
        rhs = (2 * m + 3) * (h - 1)
        ok = lhs < rhs
        if restricted_subset:
            check(ok, f"restricted-ideal threshold bound must hold at m={m}")
        threshold_rows.append((m, lhs, rhs, ok))

    pair_rows = []
    for m in range(0, m_max + 1):
        hypothesis = p >= (2 * m + 3) * (h - 1)
        lhs = a1s[m] + a1s[m + 1]
        ok = lhs < cover_rhs
        if restricted_subset and hypothesis:
            check(ok, f"paired fattening bound must hold at m={m}")
        pair_rows.append((m, hypothesis, lhs, cover_rhs, ok))

    n_for_table = supplied_n if supplied_n is not None else global_dim_bound
    thresholds = (
        ("2h-2", 2 * h - 2),
        ("4h-5", 4 * h - 5),
        ("2N(h-1)-1", None if n_for_table is None else 2 * n_for_table * (h - 1) - 1),
    )
    return BoundsReport(
        prime=p,
        coxeter_number=h,
        jantzen_bound=jantzen_bound,
        jantzen_membership=membership,
        a1_values=a1s,
        ext_vanishing=(ext_lhs, ext_rhs, ext_lhs < ext_rhs),
        cover_condition=(cover_lhs, cover_rhs, cover_lhs < cover_rhs),
        depth_values=tuple(depth_values),
        max_depth=max_depth,
        global_dim_bound=global_dim_bound,
        growth_rows=tuple(growth_rows),
        threshold_rows=tuple(threshold_rows),
        pair_rows=tuple(pair_rows),
        restricted_subset=restricted_subset,
        thresholds=thresholds,
        supplied_n=supplied_n,
    )


def partition_translate(n: int, r: int, parts, e: int) -> tuple[Weight, bool]:
    """Translate a partition of r with at most n parts to a rank n-1 weight
    by consecutive differences, and test chamber e-regularity
    (parts[i] - i pairwise distinct mod e, 1-based)."""
    require(e >= 1, "e must be a positive integer")
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InputFormatError("n must be an integer >= 2")
    parts = list(parts)
    for x in parts:
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise InputFormatError(f"partition parts must be non-negative integers, got {x!r}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise InputFormatError("partition parts must be non-increasing")
    if len(parts) > n:
        raise InputFormatError(f"partition has {len(parts)} parts, more than n={n}")
    if sum(parts) != r:
        raise InputFormatError(f"partition sums to {sum(parts)}, expected r={r}")
    padded = parts + [0] * (n - len(parts))
    weight = Weight(tuple(padded[i] - padded[i + 1] for i in range(n - 1)))
    residues = [(padded[i] - (i + 1)) % e for i in range(n)]
    chamber = len(set(residues)) == n
    return weight, chamber
