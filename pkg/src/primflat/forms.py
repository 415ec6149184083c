"""Exterior algebra on a Darboux chart.

Conventions, fixed once for the whole package:

* coordinates x1..xn, y1..yn, internally 0-based (coordinate ``i < n`` is
  x_{i+1}, coordinate ``n+i`` is y_{i+1});
* the basis covector of coordinate ``c`` is ``dx`` or ``dy`` accordingly,
  and a k-form is stored as a map from strictly increasing index tuples of
  length k to `Poly` coefficients;
* the symplectic form is ``omega = sum_i dx_i /\\ dy_i``.

Forms are homogeneous.  The degree is a plain label: forms whose degree
falls outside 0..2n are allowed but must be zero (they appear transiently
as images of degree-shifting operators).  Three fiber flavors share the
same operations: plain `Form`, `VectorForm` (rank-r column of forms of
equal degree) and `MatrixForm` (r x r).  The wedge of fiber-valued forms
composes fibers in input order with no extra sign beyond the scalar Koszul
sign; for matrices that is matrix multiplication over the wedge.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from .scalars import Poly, Scalar, _as_fraction

FormIndex = tuple[int, ...]
AnyForm = Union["Form", "VectorForm", "MatrixForm"]


def merge_indices(left: FormIndex, right: FormIndex) -> Optional[tuple[int, FormIndex]]:
    """Sign and sorted union of two increasing index tuples, None on overlap."""
    out: list[int] = []
    sign = 1
    i = j = 0
    len_l, len_r = len(left), len(right)
    while i < len_l and j < len_r:
        a, b = left[i], right[j]
        if a == b:
            return None
        if a < b:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
            if (len_l - i) % 2:
                sign = -sign
    out.extend(left[i:])
    out.extend(right[j:])
    return sign, tuple(out)


class Form:
    """Homogeneous exterior form with polynomial coefficients."""

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n: int, degree: int,
                 terms: Optional[Mapping[FormIndex, Poly]] = None):
        self.n = n
        self.degree = degree
        clean: dict[FormIndex, Poly] = {}
        if terms:
            if not 0 <= degree <= 2 * n:
                raise ValueError(f"nonzero form of degree {degree} on a {2*n}-dim chart")
            for idx, poly in terms.items():
                idx = tuple(idx)
                if len(idx) != degree or any(not 0 <= c < 2 * n for c in idx):
                    raise ValueError(f"bad index tuple {idx!r} for degree {degree}")
                if list(idx) != sorted(set(idx)):
                    raise ValueError(f"index tuple {idx!r} not strictly increasing")
                if poly.n != n:
                    raise ValueError("coefficient chart dimension mismatch")
                if not poly.is_zero:
                    clean[idx] = poly
        self.terms = clean

    # ---------- constructors ----------

    @classmethod
    def zero(cls, n: int, degree: int) -> "Form":
        return cls(n, degree)

    @classmethod
    def from_poly(cls, poly: Poly) -> "Form":
        return cls(poly.n, 0, {(): poly})

    @classmethod
    def const(cls, n: int, value: Scalar) -> "Form":
        return cls.from_poly(Poly.const(n, value))

    @classmethod
    def dx(cls, n: int, i: int) -> "Form":
        if not 1 <= i <= n:
            raise IndexError(f"dx{i} out of range for n={n}")
        return cls(n, 1, {(i - 1,): Poly.const(n, 1)})

    @classmethod
    def dy(cls, n: int, i: int) -> "Form":
        if not 1 <= i <= n:
            raise IndexError(f"dy{i} out of range for n={n}")
        return cls(n, 1, {(n + i - 1,): Poly.const(n, 1)})

    @classmethod
    def basis(cls, n: int, idx: FormIndex) -> "Form":
        return cls(n, len(idx), {tuple(idx): Poly.const(n, 1)})

    # ---------- linear structure ----------

    def _check_compatible(self, other: "Form") -> None:
        if self.n != other.n:
            raise ValueError("chart dimension mismatch")
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        self._check_compatible(other)
        degree = self.degree if self.terms else other.degree
        out = dict(self.terms)
        for idx, poly in other.terms.items():
            acc = out.get(idx)
            summed = poly if acc is None else acc + poly
            if summed.is_zero:
                out.pop(idx, None)
            else:
                out[idx] = summed
        result = Form(self.n, degree)
        result.terms = out
        return result

    def __neg__(self) -> "Form":
        result = Form(self.n, self.degree)
        result.terms = {idx: -poly for idx, poly in self.terms.items()}
        return result

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scaled(self, value: Union[Poly, Scalar]) -> "Form":
        if isinstance(value, Poly):
            out = {}
            for idx, poly in self.terms.items():
                prod = value * poly
                if not prod.is_zero:
                    out[idx] = prod
            result = Form(self.n, self.degree)
            result.terms = out
            return result
        frac = _as_fraction(value)
        result = Form(self.n, self.degree)
        if frac:
            result.terms = {idx: poly.scaled(frac) for idx, poly in self.terms.items()}
        return result

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient_degree(self) -> Optional[int]:
        """Max total degree over all polynomial coefficients; None if zero."""
        degrees = [poly.total_degree() for poly in self.terms.values()]
        return max(degrees) if degrees else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.n != other.n:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.degree, frozenset((i, hash(p)) for i, p in self.terms.items())))

    def __repr__(self) -> str:
        return f"Form(n={self.n}, degree={self.degree}, terms={self.terms!r})"


class VectorForm:
    """Rank-r column of forms of one degree (a fiber-valued form)."""

    __slots__ = ("n", "degree", "entries")

    def __init__(self, entries: Sequence[Form], degree: Optional[int] = None):
        entries = list(entries)
        if not entries:
            raise ValueError("vector form needs at least one entry")
        n = entries[0].n
        if degree is None:
            degree = entries[0].degree
        for e in entries:
            if e.n != n:
                raise ValueError("chart dimension mismatch in vector entries")
            if e.terms and e.degree != degree:
                raise ValueError("vector entries of mixed degree")
        self.n = n
        self.degree = degree
        self.entries = [Form(n, degree, e.terms) for e in entries]

    @classmethod
    def zero(cls, n: int, degree: int, rank: int) -> "VectorForm":
        return cls([Form.zero(n, degree) for _ in range(rank)], degree)

    @classmethod
    def unit(cls, n: int, rank: int, which: int) -> "VectorForm":
        entries = [Form.zero(n, 0) for _ in range(rank)]
        entries[which] = Form.const(n, 1)
        return cls(entries, 0)

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.entries)

    def map(self, fn: Callable[[Form], Form], degree: Optional[int] = None) -> "VectorForm":
        mapped = [fn(e) for e in self.entries]
        return VectorForm(mapped, degree if degree is not None else _mapped_degree(mapped))

    def __add__(self, other: "VectorForm") -> "VectorForm":
        if not isinstance(other, VectorForm):
            return NotImplemented
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        deg = self.degree if not self.is_zero else other.degree
        return VectorForm([a + b for a, b in zip(self.entries, other.entries)], deg)

    def __neg__(self) -> "VectorForm":
        return self.map(lambda e: -e, self.degree)

    def __sub__(self, other: "VectorForm") -> "VectorForm":
        return self + (-other)

    def scaled(self, value) -> "VectorForm":
        return self.map(lambda e: e.scaled(value), self.degree)

    def coefficient_degree(self) -> Optional[int]:
        degrees = [d for d in (e.coefficient_degree() for e in self.entries) if d is not None]
        return max(degrees) if degrees else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorForm):
            return NotImplemented
        return self.rank == other.rank and all(
            a == b for a, b in zip(self.entries, other.entries))

    def __repr__(self) -> str:
        return f"VectorForm({self.entries!r})"


class MatrixForm:
    """r x r matrix of forms of one degree (endomorphism-valued form)."""

    __slots__ = ("n", "degree", "entries")

    def __init__(self, entries: Sequence[Sequence[Form]], degree: Optional[int] = None):
        rows = [list(row) for row in entries]
        r = len(rows)
        if r == 0 or any(len(row) != r for row in rows):
            raise ValueError("matrix form must be square and non-empty")
        n = rows[0][0].n
        if degree is None:
            degree = rows[0][0].degree
        for row in rows:
            for e in row:
                if e.n != n:
                    raise ValueError("chart dimension mismatch in matrix entries")
                if e.terms and e.degree != degree:
                    raise ValueError("matrix entries of mixed degree")
        self.n = n
        self.degree = degree
        self.entries = [[Form(n, degree, e.terms) for e in row] for row in rows]

    @classmethod
    def zero(cls, n: int, degree: int, rank: int) -> "MatrixForm":
        return cls([[Form.zero(n, degree) for _ in range(rank)] for _ in range(rank)], degree)

    @classmethod
    def identity(cls, n: int, rank: int) -> "MatrixForm":
        return cls.from_constant(n, [[1 if i == j else 0 for j in range(rank)]
                                     for i in range(rank)])

    @classmethod
    def from_constant(cls, n: int, matrix: Sequence[Sequence[Scalar]]) -> "MatrixForm":
        return cls([[Form.const(n, v) for v in row] for row in matrix], 0)

    @classmethod
    def from_scalar_form(cls, matrix: Sequence[Sequence[Scalar]], form: Form) -> "MatrixForm":
        """Constant matrix times a scalar form (entrywise scaling)."""
        return cls([[form.scaled(_as_fraction(v)) for v in row] for row in matrix],
                   form.degree)

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.entries for e in row)

    def map(self, fn: Callable[[Form], Form], degree: Optional[int] = None) -> "MatrixForm":
        mapped = [[fn(e) for e in row] for row in self.entries]
        deg = degree if degree is not None else _mapped_degree(
            [e for row in mapped for e in row])
        return MatrixForm(mapped, deg)

    def __add__(self, other: "MatrixForm") -> "MatrixForm":
        if not isinstance(other, MatrixForm):
            return NotImplemented
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        deg = self.degree if not self.is_zero else other.degree
        return MatrixForm([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)], deg)

    def __neg__(self) -> "MatrixForm":
        return self.map(lambda e: -e, self.degree)

    def __sub__(self, other: "MatrixForm") -> "MatrixForm":
        return self + (-other)

    def scaled(self, value) -> "MatrixForm":
        return self.map(lambda e: e.scaled(value), self.degree)

    def coefficient_degree(self) -> Optional[int]:
        degrees = [d for d in (e.coefficient_degree() for row in self.entries for e in row)
                   if d is not None]
        return max(degrees) if degrees else None

    def apply_to(self, vector: VectorForm) -> VectorForm:
        return wedge(self, vector)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixForm):
            return NotImplemented
        return self.rank == other.rank and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    def __repr__(self) -> str:
        return f"MatrixForm({self.entries!r})"


def _mapped_degree(forms: Sequence[Form]) -> int:
    for f in forms:
        if f.terms:
            return f.degree
    return forms[0].degree


# ---------- wedge ----------

def _wedge_forms(a: Form, b: Form) -> Form:
    if a.n != b.n:
        raise ValueError("chart dimension mismatch")
    degree = a.degree + b.degree
    result = Form(a.n, degree)
    if a.is_zero or b.is_zero or degree > 2 * a.n:
        return result
    out: dict[FormIndex, Poly] = {}
    for idx_a, poly_a in a.terms.items():
        for idx_b, poly_b in b.terms.items():
            merged = merge_indices(idx_a, idx_b)
            if merged is None:
                continue
            sign, idx = merged
            prod = poly_a * poly_b
            if sign < 0:
                prod = -prod
            acc = out.get(idx)
            summed = prod if acc is None else acc + prod
            if summed.is_zero:
                out.pop(idx, None)
            else:
                out[idx] = summed
    result.terms = out
    return result


def wedge(a: AnyForm, b: AnyForm) -> AnyForm:
    """Exterior product; fiber-valued cases compose fibers in input order.

    Supported pairings: scalar with anything (either side), matrix.matrix,
    matrix.vector.  vector.vector and vector.matrix have no fiber
    composition and raise.
    """
    if isinstance(a, Form):
        if isinstance(b, Form):
            return _wedge_forms(a, b)
        return b.map(lambda e: _wedge_forms(a, e), a.degree + b.degree)
    if isinstance(b, Form):
        return a.map(lambda e: _wedge_forms(e, b), a.degree + b.degree)
    if isinstance(a, MatrixForm) and isinstance(b, MatrixForm):
        if a.rank != b.rank:
            raise ValueError("rank mismatch")
        degree = a.degree + b.degree
        r = a.rank
        rows = []
        for i in range(r):
            row = []
            for k in range(r):
                acc = Form.zero(a.n, degree)
                for j in range(r):
                    acc = acc + _wedge_forms(a.entries[i][j], b.entries[j][k])
                row.append(acc)
            rows.append(row)
        return MatrixForm(rows, degree)
    if isinstance(a, MatrixForm) and isinstance(b, VectorForm):
        if a.rank != b.rank:
            raise ValueError("rank mismatch")
        degree = a.degree + b.degree
        out = []
        for i in range(a.rank):
            acc = Form.zero(a.n, degree)
            for j in range(a.rank):
                acc = acc + _wedge_forms(a.entries[i][j], b.entries[j])
            out.append(acc)
        return VectorForm(out, degree)
    raise TypeError(
        f"no fiber composition for {type(a).__name__} wedge {type(b).__name__}")


# ---------- exterior derivative and contractions ----------

def _d_form(a: Form) -> Form:
    n = a.n
    degree = a.degree + 1
    result = Form(n, degree)
    if a.is_zero or degree > 2 * n:
        return result
    out: dict[FormIndex, Poly] = {}
    for idx, poly in a.terms.items():
        for coord in range(2 * n):
            derivative = poly.partial(coord)
            if derivative.is_zero:
                continue
            merged = merge_indices((coord,), idx)
            if merged is None:
                continue
            sign, new_idx = merged
            if sign < 0:
                derivative = -derivative
            acc = out.get(new_idx)
            summed = derivative if acc is None else acc + derivative
            if summed.is_zero:
                out.pop(new_idx, None)
            else:
                out[new_idx] = summed
    result.terms = out
    return result


def exterior_d(a: AnyForm) -> AnyForm:
    """d, entrywise on fiber-valued forms; satisfies d(d(a)) == 0."""
    if isinstance(a, Form):
        return _d_form(a)
    return a.map(_d_form, a.degree + 1)


def interior_product(coord: int, a: Form) -> Form:
    """Contraction with the coordinate frame vector of ``coord``."""
    n = a.n
    result = Form(n, a.degree - 1)
    out: dict[FormIndex, Poly] = {}
    for idx, poly in a.terms.items():
        try:
            pos = idx.index(coord)
        except ValueError:
            continue
        new_idx = idx[:pos] + idx[pos + 1:]
        signed = poly if pos % 2 == 0 else -poly
        acc = out.get(new_idx)
        summed = signed if acc is None else acc + signed
        if summed.is_zero:
            out.pop(new_idx, None)
        else:
            out[new_idx] = summed
    result.terms = out
    return result


def contract_lambda(a: Form) -> Form:
    """The sl(2) lowering operator: sum_i of contraction by d/dy_i then d/dx_i.

    Applied to omega it returns the constant n; a form is primitive exactly
    when this vanishes on every scalar component.
    """
    n = a.n
    result = Form(n, a.degree - 2)
    if a.degree < 2:
        return result
    for i in range(n):
        result = result + interior_product(n + i, interior_product(i, a))
    return result


def graded_commutator(a: MatrixForm, b: MatrixForm) -> MatrixForm:
    """[a, b] = a.b - (-1)^{|a||b|} b.a with fiber composition by wedge."""
    ab = wedge(a, b)
    ba = wedge(b, a)
    if (a.degree * b.degree) % 2:
        return ab + ba
    return ab - ba


# ---------- distinguished forms ----------

def omega(n: int) -> Form:
    """The Darboux symplectic form sum_i dx_i /\\ dy_i."""
    terms = {(i, n + i): Poly.const(n, 1) for i in range(n)}
    return Form(n, 2, terms)


def omega_power(n: int, p: int) -> Form:
    if p < 0:
        raise ValueError("omega_power wants p >= 0")
    result = Form.const(n, 1)
    w = omega(n)
    for _ in range(p):
        result = _wedge_forms(result, w)
    return result


def lambda_standard(n: int) -> Form:
    """sum_i x_i dy_i; d of it is omega."""
    return Form(n, 1, {(n + i,): Poly.variable(n, i) for i in range(n)})


def lambda_symmetric(n: int) -> Form:
    """(1/2) sum_i (x_i dy_i - y_i dx_i); d of it is omega."""
    half = Fraction(1, 2)
    terms: dict[FormIndex, Poly] = {}
    for i in range(n):
        terms[(n + i,)] = Poly.variable(n, i).scaled(half)
        terms[(i,)] = Poly.variable(n, n + i).scaled(-half)
    return Form(n, 1, terms)


LAMBDA_CHOICES: dict[str, Callable[[int], Form]] = {
    "standard": lambda_standard,
    "symmetric": lambda_symmetric,
}


def all_indices(n: int, degree: int) -> list[FormIndex]:
    """Strictly increasing index tuples of the given length, sorted."""
    if degree < 0 or degree > 2 * n:
        return []
    return list(itertools.combinations(range(2 * n), degree))
