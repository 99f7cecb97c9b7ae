"""Shift-action structure of finite symmetry spaces and the dependence criterion.

A finite-dimensional space of characteristics that is closed under the
partial derivatives with respect to selected 0-jet coordinates carries
one commuting matrix per coordinate.  Decomposing those matrices into
joint generalized eigenspaces and chains rewrites the basis in
exponential-polynomial form: each element is exp(sum w_s z_s) times a
polynomial in the selected coordinates whose coefficients do not involve
them.  Repeatedly applying the lowering operators d/dz_s - w_s then
produces elements whose polynomial degree in every selected coordinate is
at most 1 (at most 0 where the weight is nonzero); existence of such an
element that still involves a chosen coordinate decides whether the space
contains anything depending on that coordinate at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .engine import (
    EvolutionEquation,
    LambdaScan,
    SymmetryBasis,
    build_ansatz,
    is_symmetry,
    lambda_candidates,
    solve_symmetries,
)
from .errors import (
    ClosureViolationError,
    InternalInconsistencyError,
    UnresolvedSpectrumError,
)
from .expr import (
    Coord,
    ExpPolyElement,
    ExpPolyExpr,
    Y,
    canonical_exp_poly,
    monomial_coordinates,
)
from .linalg import (
    ONE,
    ZERO,
    RatMatrix,
    _frac,
    char_poly,
    generalized_eigenspace,
    in_span,
    jordan_chains,
    rational_roots,
    rref,
    solve,
)


@dataclass(frozen=True)
class SelectedVariables:
    """Ordered distinct 0-jet coordinates whose shifts act on the space."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        if not coords:
            raise ValueError("at least one selected coordinate required")
        if len(set(coords)) != len(coords):
            raise ValueError("selected coordinates must be distinct")
        for c in coords:
            if not c.is_zero_jet:
                raise ValueError(f"{c.name} is not a 0-jet coordinate")
        object.__setattr__(self, "coords", coords)

    def __len__(self):
        return len(self.coords)


@dataclass(frozen=True)
class ShiftAction:
    """Matrices of the selected partial derivatives on a basis of expressions."""

    elements: tuple
    selected: SelectedVariables
    matrices: tuple
    basis: Optional[SymmetryBasis] = None


def _element_list(basis) -> tuple:
    if isinstance(basis, SymmetryBasis):
        return basis.elements
    return tuple(basis)


def shift_matrices(basis, selected) -> ShiftAction:
    """Express each selected partial derivative of the basis in the basis.

    Column j of the matrix for coordinate z holds the coordinates of the
    derivative of element j.  If some derivative leaves the span the
    closure hypothesis fails for this space and a
    :class:`ClosureViolationError` names the offending element.
    """
    if not isinstance(selected, SelectedVariables):
        selected = SelectedVariables(tuple(selected))
    elements = _element_list(basis)
    if not elements:
        raise ValueError("empty basis has no shift action")
    derived = [
        [e.partial_derive(c) for e in elements] for c in selected.coords
    ]
    everything = list(elements) + [d for row in derived for d in row]
    _, vectors = monomial_coordinates(everything)
    n = len(elements)
    basis_matrix = RatMatrix.from_columns(vectors[:n])
    matrices = []
    for s, c in enumerate(selected.coords):
        cols = []
        for j in range(n):
            target = vectors[n + s * n + j]
            x = solve(basis_matrix, target)
            if x is None:
                raise ClosureViolationError(
                    f"derivative of basis element {j} with respect to {c.name} "
                    "leaves the basis span",
                    element=elements[j],
                    coord=c,
                )
            cols.append(x)
        matrices.append(RatMatrix.from_columns(cols))
    for a in range(len(matrices)):
        for b in range(a + 1, len(matrices)):
            if matrices[a] @ matrices[b] != matrices[b] @ matrices[a]:
                raise InternalInconsistencyError(
                    "shift matrices fail to commute; partial derivatives always "
                    "commute, so the coordinatization is broken"
                )
    return ShiftAction(
        elements=elements,
        selected=selected,
        matrices=tuple(matrices),
        basis=basis if isinstance(basis, SymmetryBasis) else None,
    )


@dataclass(frozen=True)
class Block:
    """One chain block: joint eigenvalue tuple plus its basis elements."""

    eigenvalues: tuple
    size: int
    degrees: tuple  # per selected coordinate: 1 + max polynomial degree in the block
    vectors: tuple  # coordinates in the original basis, eigen-end first
    elements: tuple  # ExpPolyElement, parallel to vectors


@dataclass(frozen=True)
class BlockDecomposition:
    """New basis grouped into blocks, with both change-of-basis matrices."""

    selected: SelectedVariables
    blocks: tuple
    source_elements: tuple
    to_block_coords: RatMatrix  # old coordinates -> block-basis coordinates
    from_block_coords: RatMatrix  # block-basis coordinates -> old coordinates

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def all_elements(self) -> list:
        return [el for b in self.blocks for el in b.elements]


def _restricted_matrix(matrix: RatMatrix, basis_cols: Sequence) -> RatMatrix:
    """Matrix of the action on an invariant subspace, in the given basis."""
    sub = RatMatrix.from_columns(basis_cols)
    cols = []
    for v in basis_cols:
        image = matrix.apply(v)
        x = solve(sub, image)
        if x is None:
            raise InternalInconsistencyError("subspace is not invariant")
        cols.append(x)
    return RatMatrix.from_columns(cols)


def decompose_shift_action(action: ShiftAction) -> BlockDecomposition:
    """Split the space into chain blocks of the commuting shift matrices.

    The space is refined coordinate by coordinate into joint generalized
    eigenspaces (commuting matrices preserve each other's generalized
    eigenspaces), then each joint eigenspace splits into chains of the
    first coordinate's nilpotent part.  Every resulting basis element is a
    single exponential times a polynomial in the selected coordinates.

    Raises :class:`UnresolvedSpectrumError` when a characteristic
    polynomial fails to split over the rationals; the offending factors
    are attached instead of being approximated.
    """
    elements = action.elements
    n = len(elements)
    selected = action.selected
    if n == 0:
        raise ValueError("empty action")
    spaces = [((), [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)])]
    for s, _ in enumerate(selected.coords):
        refined = []
        for eigs, cols in spaces:
            restricted = _restricted_matrix(action.matrices[s], cols)
            cp = char_poly(restricted)
            roots, residual = rational_roots(cp)
            if residual.degree >= 1:
                raise UnresolvedSpectrumError(
                    "shift spectrum does not split over the rationals",
                    factors=(residual,),
                )
            sub = RatMatrix.from_columns(cols)
            for lam, _mult in roots:
                local = generalized_eigenspace(restricted, lam)
                lifted = [sub.apply(v) for v in local]
                refined.append((eigs + (lam,), lifted))
        spaces = refined
    spaces.sort(key=lambda ec: ec[0])
    blocks = []
    for eigs, cols in spaces:
        restricted = _restricted_matrix(action.matrices[0], cols)
        sub = RatMatrix.from_columns(cols)
        chains = jordan_chains(restricted, eigs[0])
        for chain in chains:
            # chains arrive top first; store eigen-end first so degrees ascend
            vecs = [sub.apply(v) for v in reversed(chain)]
            exprs = []
            for v in vecs:
                e = ExpPolyExpr.zero()
                for coeff, src in zip(v, elements):
                    if coeff:
                        e = e + src.scale(coeff)
                exprs.append(e)
            els = tuple(canonical_exp_poly(e, selected.coords) for e in exprs)
            degs = tuple(
                max(el.degrees[s] for el in els) for s in range(len(selected.coords))
            )
            blocks.append(
                Block(
                    eigenvalues=eigs,
                    size=len(vecs),
                    degrees=degs,
                    vectors=tuple(tuple(v) for v in vecs),
                    elements=els,
                )
            )
    blocks.sort(key=lambda b: (b.eigenvalues, -b.size))  # stable within ties
    all_vecs = [v for b in blocks for v in b.vectors]
    from_block = RatMatrix.from_columns(all_vecs)
    red, pivots = rref(from_block)
    if len(pivots) != n:
        raise InternalInconsistencyError("block basis does not span the space")
    to_block = _invert(from_block)
    return BlockDecomposition(
        selected=selected,
        blocks=tuple(blocks),
        source_elements=elements,
        to_block_coords=to_block,
        from_block_coords=from_block,
    )


def _invert(m: RatMatrix) -> RatMatrix:
    n = m.rows
    aug = RatMatrix(
        [list(m.row(i)) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    )
    red, pivots = rref(aug)
    if tuple(pivots) != tuple(range(n)):
        raise InternalInconsistencyError("matrix is singular")
    return RatMatrix([[red[i, n + j] for j in range(n)] for i in range(n)])


def apply_shift(e: ExpPolyExpr, coord: Coord, lam, times: int) -> ExpPolyExpr:
    """Apply (d/d coord - lam) the given number of times."""
    if times < 0:
        raise ValueError("shift count must be non-negative")
    lam = _frac(lam)
    out = e
    for _ in range(times):
        out = out.partial_derive(coord) - out.scale(lam)
    return out


class SpecialFormElement:
    """Exponential-polynomial element with degree at most epsilon_s everywhere.

    epsilon_s is 0 for coordinates with nonzero exponential weight and 1
    for weight zero, so the polynomial part is at most linear and only in
    weight-free coordinates.
    """

    __slots__ = ("selected", "lambdas", "epsilons", "table")

    def __init__(self, element: ExpPolyElement):
        self.selected = element.selected
        self.lambdas = element.lambdas
        self.epsilons = tuple(0 if w != 0 else 1 for w in self.lambdas)
        for j, _ in element.table:
            for js, eps in zip(j, self.epsilons):
                if js > eps:
                    raise ValueError("degrees exceed the special-form caps")
        self.table = element.table

    def coefficient(self, j: tuple) -> ExpPolyExpr:
        for jj, e in self.table:
            if jj == tuple(j):
                return e
        return ExpPolyExpr.zero()

    def expression(self) -> ExpPolyExpr:
        return self.as_element().reconstruct()

    def as_element(self) -> ExpPolyElement:
        return ExpPolyElement(self.selected, self.lambdas, dict(self.table))

    def is_witness_for(self, target: Coord) -> bool:
        """Nonzero weight on the target, or a nonzero linear coefficient."""
        s = self.selected.index(target)
        if self.lambdas[s] != 0:
            return True
        return any(j[s] == 1 for j, _ in self.table)

    def __repr__(self):
        return f"SpecialFormElement({self.expression().render()})"


def reduce_to_special(elem: ExpPolyElement, target: Coord) -> SpecialFormElement:
    """Lower an exponential-polynomial element to the special form.

    The scan fixes the maximal target degree first, then greedily the
    maximal degrees of the remaining coordinates among the surviving
    terms; lowering by that many applications of each (d/dz_s - w_s)
    keeps the distinguished corner term alive.  (Exponents are clamped at
    zero for coordinates the element does not reach.)  If the greedy
    exponents fail the degree caps, a bounded exhaustive search over all
    exponent tuples finds a valid one; if the input depends on the target
    the output is additionally required to witness that dependence, and
    total failure raises :class:`InternalInconsistencyError` because the
    decomposition guarantees a witness exists.
    """
    selected = elem.selected
    g = len(selected)
    idx = selected.index(target)
    order = [idx] + [s for s in range(g) if s != idx]
    eps = tuple(0 if w != 0 else 1 for w in elem.lambdas)
    support = [j for j, _ in elem.table]
    r = [0] * g
    pool = support
    for s in order:
        r[s] = max(j[s] for j in pool)
        pool = [j for j in pool if j[s] == r[s]]
    exponents = tuple(max(r[s] - eps[s], 0) for s in range(g))
    expr = elem.reconstruct()
    dependent = expr.depends_on(target)

    def attempt(exps):
        out = expr
        for s in range(g):
            out = apply_shift(out, selected[s], elem.lambdas[s], exps[s])
        if out.is_zero():
            return None
        candidate = canonical_exp_poly(out, selected)
        try:
            special = SpecialFormElement(candidate)
        except ValueError:
            return None
        if dependent and not special.is_witness_for(target):
            return None
        return special

    result = attempt(exponents)
    if result is not None:
        return result
    for exps in product(*(range(k) for k in elem.degrees)):
        result = attempt(exps)
        if result is not None:
            return result
    raise InternalInconsistencyError(
        "no exponent tuple yields a valid special form; the block structure "
        "guarantees one, so this input cannot come from a decomposed basis"
    )


@dataclass(frozen=True)
class CriterionVerdict:
    """Answer to: does the space contain elements depending on the target?"""

    target: Coord
    exists: bool
    witness: Optional[SpecialFormElement]
    witness_expression: Optional[ExpPolyExpr]
    certificate: Optional[dict]
    method: str
    lambda_scan: Optional[LambdaScan] = None


def dependence_criterion(
    basis,
    selected,
    target: Coord,
    decomposition: Optional[BlockDecomposition] = None,
) -> CriterionVerdict:
    """Decide target-dependence from the block decomposition.

    Existence holds exactly when some decomposed element depends on the
    target coordinate; the first such element (in canonical block order)
    is lowered to special form and returned as the witness.  The witness
    is re-verified to stay inside the original span and, when the basis
    carries its equation, to still be a symmetry.
    """
    if not isinstance(selected, SelectedVariables):
        selected = SelectedVariables(tuple(selected))
    if target not in selected.coords:
        raise ValueError("target must be one of the selected coordinates")
    if decomposition is None:
        action = shift_matrices(basis, selected)
        decomposition = decompose_shift_action(action)
    elements = _element_list(basis)
    for block in decomposition.blocks:
        for el in block.elements:
            if not el.reconstruct().depends_on(target):
                continue
            witness = reduce_to_special(el, target)
            wexpr = witness.expression()
            _verify_witness(wexpr, elements, basis)
            return CriterionVerdict(
                target=target,
                exists=True,
                witness=witness,
                witness_expression=wexpr,
                certificate=None,
                method="decomposition",
            )
    certificate = {
        "kind": "ansatz-exhaustive",
        "basis_size": len(elements),
        "statement": (
            f"no element of the computed space depends on {target.name}; "
            "exhaustive within the declared ansatz"
        ),
    }
    if isinstance(basis, SymmetryBasis):
        certificate["ansatz"] = basis.ansatz.describe()
    return CriterionVerdict(
        target=target,
        exists=False,
        witness=None,
        witness_expression=None,
        certificate=certificate,
        method="decomposition",
    )


def _verify_witness(wexpr: ExpPolyExpr, elements, basis):
    _, vectors = monomial_coordinates(list(elements) + [wexpr])
    if not in_span(vectors[:-1], vectors[-1]):
        raise InternalInconsistencyError("witness left the basis span")
    if isinstance(basis, SymmetryBasis) and not is_symmetry(wexpr, basis.equation):
        raise InternalInconsistencyError("witness is not a symmetry")


def _preferred_weights(weights) -> list:
    """Nonzero candidates, positive before negative, small magnitude first."""
    return sorted((w for w in weights if w != 0), key=lambda w: (abs(w), w < 0))


def dependence_criterion_direct(
    eq: EvolutionEquation,
    q_max: int,
    jet_degree: int,
    target: Coord = Y,
) -> CriterionVerdict:
    """Decide y-dependence by searching the two special shapes directly.

    Shape (a): exp(w*y) K with y-free K and w nonzero, located by the
    symbolic weight scan and confirmed by a fixed-weight solve.  Shape
    (b): K0 + y*K1 with y-free K's and K1 nonzero.  Existence of a
    y-dependent symmetry in the ansatz class is equivalent to one of the
    shapes being realizable.
    """
    if target != Y:
        raise ValueError("the direct criterion is implemented for the y coordinate")
    scan = lambda_candidates(build_ansatz(q_max, 0, jet_degree, symbolic=True), eq)
    trial_weights = _preferred_weights(scan.candidates)
    if scan.generic_nullity > 0 and ONE not in trial_weights:
        # solutions exist at every weight; pick a concrete nonzero one
        trial_weights.append(ONE)
    for w in trial_weights:
        fixed = solve_symmetries(build_ansatz(q_max, 0, jet_degree, weights=(w,)), eq)
        if fixed.elements:
            element = canonical_exp_poly(fixed.elements[0], (target,))
            witness = SpecialFormElement(element)
            return CriterionVerdict(
                target=target,
                exists=True,
                witness=witness,
                witness_expression=fixed.elements[0],
                certificate=None,
                method="direct-exponential",
                lambda_scan=scan,
            )
    linear = solve_symmetries(
        build_ansatz(q_max, 1, jet_degree, weights=(ZERO,)), eq
    )
    for e in linear.elements:
        if e.depends_on(target):
            witness = SpecialFormElement(canonical_exp_poly(e, (target,)))
            return CriterionVerdict(
                target=target,
                exists=True,
                witness=witness,
                witness_expression=e,
                certificate=None,
                method="direct-linear",
                lambda_scan=scan,
            )
    certificate = {
        "kind": "ansatz-exhaustive",
        "statement": (
            "no exponential-shape or linear-shape symmetry exists within "
            f"the ansatz (q_max={q_max}, jet_degree={jet_degree}) over the rationals"
        ),
    }
    return CriterionVerdict(
        target=target,
        exists=False,
        witness=None,
        witness_expression=None,
        certificate=certificate,
        method="direct",
        lambda_scan=scan,
    )
