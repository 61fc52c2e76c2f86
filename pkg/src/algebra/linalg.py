"""
Algebra linear exata densa.

Sobre Q a eliminacao e fraction-free (Bareiss) em inteiros, sobre F_p e a
eliminacao de Gauss usual. Nenhuma tolerancia numerica e usada.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from src.algebra.field import FieldSpec, Scalar
from src.exceptions import DimensionMismatchError

Vector = list[Scalar]


@dataclass(frozen=True)
class Matrix:
    """Matriz retangular de escalares exatos."""

    field: FieldSpec
    rows: tuple[tuple[Scalar, ...], ...]
    ncols: int

    @classmethod
    def from_rows(
        cls,
        field: FieldSpec,
        rows: Sequence[Sequence[Scalar]],
        ncols: int | None = None,
    ) -> "Matrix":
        """
        Constroi uma matriz a partir de linhas.

        Raises:
            DimensionMismatchError: Linhas com comprimentos diferentes
        """
        coerced = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        width = ncols if ncols is not None else (len(coerced[0]) if coerced else 0)
        if any(len(row) != width for row in coerced):
            raise DimensionMismatchError("Matriz nao retangular")
        return cls(field, coerced, width)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence[Scalar]]) -> "Matrix":
        """Constroi uma matriz cujas colunas sao os vetores dados."""
        if not columns:
            return cls(field, (), 0)
        return cls.from_rows(field, list(zip(*columns)), ncols=len(columns))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def transpose(self) -> "Matrix":
        if not self.rows:
            return Matrix(self.field, tuple(() for _ in range(self.ncols)), 0)
        return Matrix(self.field, tuple(zip(*self.rows)), self.nrows)

    def apply(self, v: Sequence[Scalar]) -> Vector:
        """Produto matriz-vetor."""
        return [self.field.dot(row, v) for row in self.rows]


# ============ ELIMINACAO ============

def _bareiss_echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Forma escalonada fraction-free de uma matriz inteira."""
    m = [row[:] for row in rows]
    nrows = len(m)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            lead = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, ncols):
                # divisao exata: as entradas sao menores da matriz original
                row_i[j] = (piv * row_i[j] - lead * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _rational_echelon(rows: Sequence[Sequence[Scalar]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Limpa denominadores linha a linha e aplica Bareiss."""
    integer_rows = []
    for row in rows:
        fracs = [Fraction(x) for x in row]
        scale = lcm(*(f.denominator for f in fracs)) if fracs else 1
        integer_rows.append([int(f * scale) for f in fracs])
    return _bareiss_echelon(integer_rows, ncols)


def _prime_echelon(
    rows: Sequence[Sequence[Scalar]],
    ncols: int,
    p: int,
    reduced: bool,
) -> tuple[list[list[int]], list[int]]:
    """Eliminacao de Gauss(-Jordan) mod p com pivots normalizados a 1."""
    m = [[x % p for x in row] for row in rows]
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = pow(m[r][c], -1, p)
        row_r = [x * inv % p for x in m[r]]
        m[r] = row_r
        start = 0 if reduced else r + 1
        for i in range(start, nrows):
            if i == r:
                continue
            lead = m[i][c]
            if lead:
                m[i] = [(x - lead * y) % p for x, y in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def row_reduce(
    field: FieldSpec,
    rows: Sequence[Sequence[Scalar]],
    ncols: int,
) -> tuple[list[Vector], list[int]]:
    """
    Forma escalonada reduzida (RREF) exata.

    Args:
        field: Corpo das entradas
        rows: Linhas da matriz
        ncols: Numero de colunas

    Returns:
        Tuple (linhas nao nulas da RREF, colunas pivot)
    """
    if field.is_prime:
        return _prime_echelon(rows, ncols, field.p, reduced=True)

    echelon, pivots = _rational_echelon(rows, ncols)
    reduced: list[Vector] = []
    for row, c in zip(echelon, pivots):
        piv = row[c]
        reduced.append([Fraction(x, piv) for x in row])
    # substituicao para tras
    for k in range(len(reduced) - 1, -1, -1):
        c = pivots[k]
        for i in range(k):
            lead = reduced[i][c]
            if lead:
                reduced[i] = [x - lead * y for x, y in zip(reduced[i], reduced[k])]
    return reduced, pivots


def mat_rank(M: Matrix) -> int:
    """
    Rank exato de uma matriz.

    Args:
        M: Matriz

    Returns:
        0 <= rank <= min(linhas, colunas)
    """
    if not M.rows or M.ncols == 0:
        return 0
    if M.field.is_prime:
        _, pivots = _prime_echelon(M.rows, M.ncols, M.field.p, reduced=False)
    else:
        _, pivots = _rational_echelon(M.rows, M.ncols)
    return len(pivots)


def vectors_rank(field: FieldSpec, vectors: Sequence[Sequence[Scalar]]) -> int:
    """Dimensao do span de uma lista de vetores."""
    if not vectors:
        return 0
    return mat_rank(Matrix.from_rows(field, vectors))


def kernel_basis(M: Matrix) -> list[Vector]:
    """
    Base do nucleo a direita (M v = 0).

    Returns:
        Lista com cols - rank(M) vetores
    """
    field = M.field
    if M.ncols == 0:
        return []
    rref, pivots = row_reduce(field, M.rows, M.ncols)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(M.ncols):
        if free in pivot_set:
            continue
        v: Vector = [field.zero] * M.ncols
        v[free] = field.one
        for row, c in zip(rref, pivots):
            v[c] = field.neg(row[free])
        basis.append(v)
    return basis


def solve(M: Matrix, b: Sequence[Scalar]) -> Vector | None:
    """
    Resolve M x = b.

    Returns:
        Uma solucao (variaveis livres a zero) ou None se o sistema e impossivel
    """
    field = M.field
    if len(b) != M.nrows:
        raise DimensionMismatchError("Lado direito com comprimento errado")
    augmented = [list(row) + [field.coerce(x)] for row, x in zip(M.rows, b)]
    rref, pivots = row_reduce(field, augmented, M.ncols + 1)
    if pivots and pivots[-1] == M.ncols:
        return None
    x: Vector = [field.zero] * M.ncols
    for row, c in zip(rref, pivots):
        x[c] = row[-1]
    return x


def span_basis(field: FieldSpec, vectors: Sequence[Sequence[Scalar]]) -> list[Vector]:
    """Base canonica (RREF) do span dos vetores."""
    if not vectors:
        return []
    rref, _ = row_reduce(field, vectors, len(vectors[0]))
    return rref


def subspace_intersect(
    field: FieldSpec,
    basis1: Sequence[Sequence[Scalar]],
    basis2: Sequence[Sequence[Scalar]],
) -> list[Vector]:
    """
    Base de span(basis1) interseccao span(basis2).

    Resolve sum(a_i u_i) = sum(b_j w_j) pelo nucleo de [U | -W].

    Raises:
        DimensionMismatchError: Vetores com comprimentos diferentes
    """
    if not basis1 or not basis2:
        return []
    length = len(basis1[0])
    if any(len(v) != length for v in list(basis1) + list(basis2)):
        raise DimensionMismatchError("Vetores com comprimentos diferentes")
    columns = [list(v) for v in basis1] + [[field.neg(x) for x in w] for w in basis2]
    kernel = kernel_basis(Matrix.from_columns(field, columns))
    k1 = len(basis1)
    candidates = [field.linear_combination(vec[:k1], basis1) for vec in kernel]
    candidates = [c for c in candidates if any(x != 0 for x in c)]
    return span_basis(field, candidates)


class IncrementalSpan:
    """
    Span construido vetor a vetor, em forma escalonada.

    Usado nas pesquisas exaustivas: estender custa O(k n) e os objetos antigos
    continuam validos (as linhas sao tuplos partilhados).
    """

    __slots__ = ("field", "rows", "pivots")

    def __init__(
        self,
        field: FieldSpec,
        rows: tuple[tuple[Scalar, ...], ...] = (),
        pivots: tuple[int, ...] = (),
    ):
        self.field = field
        self.rows = rows
        self.pivots = pivots

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[Scalar]) -> Vector:
        """Reduz v pelas linhas, pela ordem de insercao."""
        w = list(v)
        for row, piv in zip(self.rows, self.pivots):
            c = w[piv]
            if c != 0:
                w = self.field.combine(w, c, row)
        return w

    def contains(self, v: Sequence[Scalar]) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def extend(self, v: Sequence[Scalar]) -> "IncrementalSpan | None":
        """
        Retorna o span alargado com v, ou None se v ja pertence ao span.
        """
        w = self.reduce(v)
        lead = next((j for j, x in enumerate(w) if x != 0), None)
        if lead is None:
            return None
        w = self.field.scale(self.field.inv(w[lead]), w)
        return IncrementalSpan(self.field, self.rows + (tuple(w),), self.pivots + (lead,))
