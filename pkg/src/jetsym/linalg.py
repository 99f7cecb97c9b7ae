"""Exact rational linear algebra and univariate polynomials.

Everything here works over arbitrary-precision rationals
(:class:`fractions.Fraction`); there is no floating point anywhere.
Matrices are immutable, operations are pure, and every basis returned
follows a fixed normalization rule (first nonzero entry equals one) so
downstream output is deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    NonSquareError,
    NotEigenvalueError,
    ZeroPolynomialError,
)

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RatMatrix:
    """Immutable dense matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: Iterable[Iterable], cols: int = None):
        data = tuple(tuple(_frac(x) for x in row) for row in rows)
        self._data = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else (cols or 0)
        if any(len(r) != self.cols for r in data):
            raise ValueError("ragged matrix rows")

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Fraction]]) -> "RatMatrix":
        if not columns:
            return cls([])
        n = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(n)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def tolists(self) -> list:
        return [list(r) for r in self._data]

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"RatMatrix[{body}]"

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RatMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self._data, other._data)
            ]
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + other.scale(-ONE)

    def scale(self, c) -> "RatMatrix":
        c = _frac(c)
        return RatMatrix([[c * x for x in r] for r in self._data])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return RatMatrix(
            [
                [sum((a * b for a, b in zip(row, col)), ZERO) for col in cols]
                for row in self._data
            ]
        )

    def apply(self, vec: Sequence[Fraction]) -> tuple:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(sum((a * b for a, b in zip(row, vec)), ZERO) for row in self._data)

    def transpose(self) -> "RatMatrix":
        return RatMatrix([self.column(j) for j in range(self.cols)])

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self) -> Fraction:
        if not self.is_square():
            raise NonSquareError("trace of non-square matrix")
        return sum((self._data[i][i] for i in range(self.rows)), ZERO)


def rref(m: RatMatrix) -> tuple:
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where pivots is the strictly increasing tuple
    of pivot column indices.
    """
    data = m.tolists()
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if data[i][c] != 0), None)
        if pr is None:
            continue
        data[r], data[pr] = data[pr], data[r]
        inv = ONE / data[r][c]
        data[r] = [x * inv for x in data[r]]
        for i in range(nrows):
            if i != r and data[i][c] != 0:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], data[r])]
        pivots.append(c)
        r += 1
    return RatMatrix(data), tuple(pivots)


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


def nullspace(m: RatMatrix) -> list:
    """Basis of the right kernel of ``m``.

    Each basis vector is normalized so its first nonzero entry is 1; the
    list is ordered by ascending free column, which makes the result a
    canonical representative suitable for golden tests.
    """
    red, pivots = rref(m)
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    basis = []
    for fc in free:
        v = [ZERO] * m.cols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, fc]
        basis.append(normalize_vector(tuple(v)))
    return basis


def normalize_vector(v: Sequence[Fraction]) -> tuple:
    """Scale so the first nonzero entry is 1 (zero vectors unchanged)."""
    lead = next((x for x in v if x != 0), None)
    if lead is None or lead == 1:
        return tuple(v)
    inv = ONE / lead
    return tuple(x * inv for x in v)


def solve(m: RatMatrix, b: Sequence[Fraction]):
    """One solution of ``m x = b``, or ``None`` if inconsistent."""
    aug = RatMatrix([list(m.row(i)) + [b[i]] for i in range(m.rows)])
    red, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [ZERO] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r, m.cols]
    return tuple(x)


def in_span(columns: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    """Whether ``v`` lies in the span of the given column vectors."""
    if not columns:
        return all(x == 0 for x in v)
    return solve(RatMatrix.from_columns(columns), v) is not None


# ---------------------------------------------------------------------------
# univariate polynomials over the rationals


class UniPoly:
    """Dense univariate polynomial, coefficients ascending by degree."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "lambda"):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def zero(cls, var: str = "lambda") -> "UniPoly":
        return cls((), var)

    @classmethod
    def one(cls, var: str = "lambda") -> "UniPoly":
        return cls((ONE,), var)

    @classmethod
    def constant(cls, c, var: str = "lambda") -> "UniPoly":
        return cls((_frac(c),), var)

    @classmethod
    def variable(cls, var: str = "lambda") -> "UniPoly":
        return cls((ZERO, ONE), var)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomialError("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(
            (self.coeff(k) + other.coeff(k) for k in range(n)), self.var
        )

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(
            (self.coeff(k) - other.coeff(k) for k in range(n)), self.var
        )

    def __neg__(self) -> "UniPoly":
        return UniPoly((-c for c in self.coeffs), self.var)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.var)
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out, self.var)

    def scale(self, c) -> "UniPoly":
        c = _frac(c)
        return UniPoly((c * a for a in self.coeffs), self.var)

    def shift_up(self, k: int) -> "UniPoly":
        """Multiply by the k-th power of the variable."""
        if self.is_zero():
            return self
        return UniPoly((ZERO,) * k + self.coeffs, self.var)

    def eval(self, x) -> Fraction:
        x = _frac(x)
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def eval_matrix(self, m: RatMatrix) -> RatMatrix:
        """Horner evaluation at a square matrix."""
        if not m.is_square():
            raise NonSquareError("polynomial evaluation at non-square matrix")
        out = RatMatrix.zero(m.rows, m.cols)
        eye = RatMatrix.identity(m.rows)
        for c in reversed(self.coeffs):
            out = (out @ m) + eye.scale(c)
        return out

    def divmod(self, other: "UniPoly") -> tuple:
        if other.is_zero():
            raise ZeroPolynomialError("division by zero polynomial")
        q = [ZERO] * max(len(self.coeffs) - len(other.coeffs) + 1, 0)
        rem = list(self.coeffs)
        d, lead = other.degree, other.leading()
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            k = len(rem) - 1
            if rem[-1] == 0:
                rem.pop()
                continue
            f = rem[-1] / lead
            q[k - d] = f
            for i, c in enumerate(other.coeffs):
                rem[k - d + i] -= f * c
            rem.pop()
        return UniPoly(q, self.var), UniPoly(rem, self.var)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv = ONE / self.leading()
        return UniPoly((c * inv for c in self.coeffs), self.var)

    def derivative(self) -> "UniPoly":
        return UniPoly(
            (k * c for k, c in enumerate(self.coeffs) if k > 0), self.var
        )

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def sort_key(self) -> tuple:
        return (self.degree, self.coeffs)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeff(k)
            if c == 0:
                continue
            if k == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}{self.var}" + (f"^{k}" if k > 1 else "")
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def __repr__(self):
        return f"UniPoly({self})"


def char_poly(m: RatMatrix) -> UniPoly:
    """Monic characteristic polynomial via the Faddeev-LeVerrier recurrence."""
    if not m.is_square():
        raise NonSquareError("characteristic polynomial of non-square matrix")
    n = m.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    aux = RatMatrix.zero(n, n)
    eye = RatMatrix.identity(n)
    for k in range(1, n + 1):
        aux = (m @ aux) + eye.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ aux).trace() / k
    return UniPoly(coeffs)


def _divisors(n: int) -> list:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: UniPoly) -> tuple:
    """All rational roots with multiplicities, plus the rational-root-free residual.

    Uses the primitive integer form and divisor enumeration of the leading
    and trailing coefficients, so the search is complete for rational roots.
    The residual is returned monic.
    """
    if p.is_zero():
        raise ZeroPolynomialError("root search on zero polynomial")
    roots = []
    work = p
    # powers of the variable come off first
    zmult = 0
    while not work.is_zero() and work.coeff(0) == 0 and work.degree > 0:
        work = UniPoly(work.coeffs[1:], p.var)
        zmult += 1
    if zmult:
        roots.append((ZERO, zmult))
    if work.degree >= 1:
        den_lcm = 1
        for c in work.coeffs:
            den_lcm = den_lcm * c.denominator // _gcd_int(den_lcm, c.denominator)
        ints = [int(c * den_lcm) for c in work.coeffs]
        g = 0
        for v in ints:
            g = _gcd_int(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        lead, trail = ints[-1], ints[0]
        cands = set()
        for pnum in _divisors(trail):
            for qden in _divisors(lead):
                cands.add(Fraction(pnum, qden))
                cands.add(Fraction(-pnum, qden))
        for cand in sorted(cands):
            mult = 0
            while work.degree >= 1 and work.eval(cand) == 0:
                work = work.divmod(UniPoly((-cand, ONE), p.var))[0]
                mult += 1
            if mult:
                roots.append((cand, mult))
    roots.sort(key=lambda rm: rm[0])
    residual = work.monic() if not work.is_zero() else UniPoly.one(p.var)
    if residual.degree < 1:
        residual = UniPoly.one(p.var)
    return roots, residual


def _gcd_int(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def generalized_eigenspace(m: RatMatrix, lam) -> list:
    """Basis of the kernel of the n-th power of ``m - lam*I``."""
    if not m.is_square():
        raise NonSquareError("generalized eigenspace of non-square matrix")
    lam = _frac(lam)
    n = m.rows
    shifted = m - RatMatrix.identity(n).scale(lam)
    power = RatMatrix.identity(n)
    for _ in range(n):
        power = power @ shifted
    return nullspace(power)


class _SpanTracker:
    """Incremental exact independence test (row-reduced staircase)."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows = []  # list of (pivot index, normalized vector)

    def reduce(self, v: Sequence[Fraction]) -> tuple:
        v = list(v)
        for piv, row in self.rows:
            if v[piv] != 0:
                f = v[piv]
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def add(self, v: Sequence[Fraction]) -> bool:
        """Insert if independent; returns True when the span grew."""
        red = self.reduce(v)
        piv = next((i for i, x in enumerate(red) if x != 0), None)
        if piv is None:
            return False
        inv = ONE / red[piv]
        self.rows.append((piv, tuple(x * inv for x in red)))
        self.rows.sort(key=lambda pr: pr[0])
        return True

    def contains(self, v: Sequence[Fraction]) -> bool:
        return all(x == 0 for x in self.reduce(v))


def jordan_chains(m: RatMatrix, lam) -> list:
    """Jordan chains of ``m`` at the rational eigenvalue ``lam``.

    Each chain is a list ``[v_k, ..., v_1]`` (top first) satisfying
    ``(m - lam*I) v_j = v_{j-1}`` and ``(m - lam*I) v_1 = 0``.  Chains
    partition the generalized eigenspace and are sorted by descending
    length; block sizes are exactly the chain lengths.
    """
    if not m.is_square():
        raise NonSquareError("jordan chains of non-square matrix")
    lam = _frac(lam)
    n = m.rows
    shifted = m - RatMatrix.identity(n).scale(lam)
    kernels = [[]]
    power = RatMatrix.identity(n)
    while True:
        power = power @ shifted
        ker = nullspace(power)
        if len(ker) == len(kernels[-1]):
            break
        kernels.append(ker)
        if len(ker) == n:
            break
    if len(kernels) == 1:
        raise NotEigenvalueError(f"{lam} is not an eigenvalue")
    depth = len(kernels) - 1
    chains = []
    carried = []
    for j in range(depth, 0, -1):
        tracker = _SpanTracker(n)
        for v in kernels[j - 1]:
            tracker.add(v)
        for v in carried:
            tracker.add(v)
        tops = []
        for v in kernels[j]:
            if tracker.add(v):
                tops.append(v)
        for top in tops:
            chain = [tuple(top)]
            for _ in range(j - 1):
                chain.append(shifted.apply(chain[-1]))
            chains.append(chain)
        carried = [shifted.apply(v) for v in carried] + [
            shifted.apply(t) for t in tops
        ]
    chains.sort(key=len, reverse=True)  # stable: construction order breaks ties
    out = []
    for chain in chains:
        lead = next((x for x in chain[0] if x != 0), ONE)
        inv = ONE / lead
        out.append([tuple(x * inv for x in v) for v in chain])
    return out


# ---------------------------------------------------------------------------
# matrices over UniPoly: fraction-free elimination and modular rank


def _poly_exact_div(num: UniPoly, den: UniPoly) -> UniPoly:
    q, r = num.divmod(den)
    if not r.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return q


def poly_matrix_pivots(rows: Sequence[Sequence[UniPoly]]) -> list:
    """Pivot polynomials of a division-free (Bareiss) elimination.

    Pivots are selected by lowest degree, ties broken by coefficient
    tuple then row order, which keeps the run deterministic and the
    degrees small.  Every parameter value at which the rank drops below
    the generic rank is a root of at least one returned pivot (the last
    pivot is, up to sign, a maximal non-vanishing minor).
    """
    mat = [list(r) for r in rows]
    if not mat:
        return []
    nrows, ncols = len(mat), len(mat[0])
    pivots = []
    prev = UniPoly.one()
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        cands = [
            (mat[i][c].sort_key(), i) for i in range(r, nrows) if not mat[i][c].is_zero()
        ]
        if not cands:
            continue
        _, pr = min(cands)
        mat[r], mat[pr] = mat[pr], mat[r]
        pivot = mat[r][c]
        pivots.append(pivot)
        for i in range(r + 1, nrows):
            factor = mat[i][c]
            crossed = [
                pivot * mat[i][j] - factor * mat[r][j] for j in range(ncols)
            ]
            try:
                # Bareiss guarantees exact division by the previous pivot;
                # on failure keep the whole undivided row (a row scaling
                # only adds spurious candidate roots, never loses one)
                mat[i] = [_poly_exact_div(x, prev) for x in crossed]
            except ArithmeticError:
                mat[i] = crossed
        prev = pivot
        r += 1
    return pivots


class _NeedsSplit(Exception):
    def __init__(self, factor: UniPoly):
        self.factor = factor


def _inverse_mod(a: UniPoly, modulus: UniPoly) -> UniPoly:
    """Inverse of ``a`` modulo ``modulus``; raises _NeedsSplit on zero divisors."""
    r0, r1 = modulus, a.divmod(modulus)[1]
    s0, s1 = UniPoly.zero(), UniPoly.one()
    while not r1.is_zero():
        q, r2 = r0.divmod(r1)
        r0, r1 = r1, r2
        s0, s1 = s1, s0 - q * s1
    if r0.degree > 0:
        raise _NeedsSplit(r0.monic())
    inv_lead = UniPoly.constant(ONE / r0.coeffs[0])
    return (s0 * inv_lead).divmod(modulus)[1]


def rank_modulo(rows: Sequence[Sequence[UniPoly]], modulus: UniPoly) -> list:
    """Ranks of a polynomial matrix over the quotient rings by ``modulus``.

    If a zero divisor turns up during elimination the modulus is split by
    the discovered factor and both halves are processed, so the result is
    a list of ``(factor, rank)`` pairs whose factors multiply to a
    divisor-closed refinement of ``modulus``.
    """
    modulus = modulus.monic()
    mat = [[e.divmod(modulus)[1] for e in row] for row in rows]
    try:
        nrows = len(mat)
        ncols = len(mat[0]) if mat else 0
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            pr = next((i for i in range(r, nrows) if not mat[i][c].is_zero()), None)
            if pr is None:
                continue
            mat[r], mat[pr] = mat[pr], mat[r]
            inv = _inverse_mod(mat[r][c], modulus)
            mat[r] = [(inv * e).divmod(modulus)[1] for e in mat[r]]
            for i in range(nrows):
                if i != r and not mat[i][c].is_zero():
                    f = mat[i][c]
                    mat[i] = [
                        (a - f * b).divmod(modulus)[1]
                        for a, b in zip(mat[i], mat[r])
                    ]
            r += 1
        return [(modulus, r)]
    except _NeedsSplit as split:
        g = split.factor
        other = _poly_exact_div(modulus, g).monic()
        out = rank_modulo(rows, g)
        if other.degree > 0:
            out.extend(rank_modulo(rows, other))
        return out


def squarefree_factors(p: UniPoly) -> list:
    """Distinct squarefree factors of ``p`` (monic, nonconstant)."""
    if p.degree < 1:
        return []
    work = p.monic()
    out = []
    while work.degree >= 1:
        g = work.gcd(work.derivative())
        sqfree = _poly_exact_div(work, g).monic() if g.degree >= 1 else work
        if sqfree.degree >= 1 and sqfree not in out:
            out.append(sqfree)
        if g.degree < 1:
            break
        work = g
    return out
