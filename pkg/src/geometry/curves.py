"""
Retas e conicas de P^r com parametrizacoes racionais P^1 -> curva.

As parametrizacoes permitem puxar pontos de <nu_d(curva)> para formas
binarias de grau d (reta) ou 2d (conica lisa).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from src.algebra.field import FieldSpec, Scalar
from src.algebra.forms import monomials
from src.algebra.linalg import Matrix, kernel_basis, mat_rank, row_reduce, solve
from src.algebra.points import ProjPoint, normalize
from src.exceptions import InputError

BinaryCoefficients = list[Scalar]

# monomios de grau 2 em (u0, u1, u2), ordem grlex
_QUADRATIC = monomials(2, 2)


def _plane_basis(
    field: FieldSpec,
    vectors: Sequence[Sequence[Scalar]],
) -> tuple[list[list[Scalar]], list[int]]:
    rows, pivots = row_reduce(field, vectors, len(vectors[0]))
    return rows, pivots


def _poly_mul(field: FieldSpec, a: BinaryCoefficients, b: BinaryCoefficients) -> BinaryCoefficients:
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return out


def pullback_matrix(
    field: FieldSpec,
    components: Sequence[BinaryCoefficients],
    d: int,
) -> Matrix:
    """
    Matriz M com nu_d(phi(s,t)) = M nu_{d e}(s,t).

    Args:
        field: Corpo
        components: Coordenadas de phi como formas binarias de grau e
            (indice j <-> s^(e-j) t^j)
        d: Grau do mergulho

    Returns:
        Matriz (N+1) x (d e + 1)
    """
    e = len(components[0]) - 1
    powers: list[list[BinaryCoefficients]] = []
    for comp in components:
        row = [[field.one]]
        for _ in range(d):
            row.append(_poly_mul(field, row[-1], comp))
        powers.append(row)
    rows = []
    for exps in monomials(len(components) - 1, d):
        poly = [field.one]
        for k, m in enumerate(exps):
            if m:
                poly = _poly_mul(field, poly, powers[k][m])
        rows.append(poly + [field.zero] * (d * e + 1 - len(poly)))
    return Matrix.from_rows(field, rows)


# ============ RETAS ============

@dataclass(frozen=True)
class Line:
    """
    Reta de P^r guardada pela base escalonada reduzida do seu plano vetorial.

    A parametrizacao e (s:t) -> s*base[0] + t*base[1], injetiva.
    """

    field: FieldSpec
    base: tuple[tuple[Scalar, ...], tuple[Scalar, ...]]
    pivots: tuple[int, int]

    @classmethod
    def through(cls, p: ProjPoint, q: ProjPoint) -> "Line":
        """
        Reta por dois pontos distintos.

        Raises:
            InputError: Pontos iguais
        """
        rows, pivots = _plane_basis(p.field, [p.coords, q.coords])
        if len(rows) != 2:
            raise InputError("Reta exige dois pontos distintos")
        return cls(p.field, (tuple(rows[0]), tuple(rows[1])), (pivots[0], pivots[1]))

    @property
    def param_degree(self) -> int:
        return 1

    @property
    def base_points(self) -> tuple[ProjPoint, ProjPoint]:
        return normalize(self.field, self.base[0]), normalize(self.field, self.base[1])

    def key(self) -> tuple:
        return self.base

    def contains(self, point: ProjPoint) -> bool:
        field = self.field
        rest = list(point.coords)
        for row, piv in zip(self.base, self.pivots):
            c = rest[piv]
            if c != 0:
                rest = field.combine(rest, c, row)
        return all(x == 0 for x in rest)

    def point_at(self, param: ProjPoint) -> ProjPoint:
        s, t = param.coords
        field = self.field
        raw = [field.add(field.mul(s, x), field.mul(t, y)) for x, y in zip(*self.base)]
        return normalize(field, raw)

    def parameter_of(self, point: ProjPoint) -> ProjPoint:
        """
        Parametro (s:t) de um ponto da reta.

        Raises:
            InputError: Ponto fora da reta
        """
        if not self.contains(point):
            raise InputError("Ponto fora da reta")
        return normalize(self.field, [point.coords[self.pivots[0]], point.coords[self.pivots[1]]])

    def param_components(self) -> list[BinaryCoefficients]:
        return [[x, y] for x, y in zip(*self.base)]

    def intersection(self, other: "Line") -> ProjPoint | None:
        """Ponto comum de duas retas distintas e coplanares (None caso contrario)."""
        if self.key() == other.key():
            return None
        field = self.field
        columns = [list(self.base[0]), list(self.base[1]),
                   [field.neg(x) for x in other.base[0]], [field.neg(x) for x in other.base[1]]]
        kernel = kernel_basis(Matrix.from_columns(field, columns))
        if len(kernel) != 1:
            return None
        a, b = kernel[0][0], kernel[0][1]
        return self.point_at(normalize(field, [a, b]))


# ============ CONICAS ============

class ConicKind(str, Enum):
    """Tipo de conica reduzida."""
    SMOOTH = "smooth"
    TWO_LINES = "two_lines"


def _symmetric_matrix(field: FieldSpec, equation: Sequence[Scalar]) -> list[list[Scalar]]:
    half = field.inv(field.coerce(2))
    m = [[field.zero] * 3 for _ in range(3)]
    for exps, c in zip(_QUADRATIC, equation):
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        i, j = idx
        if i == j:
            m[i][i] = c
        else:
            m[i][j] = m[j][i] = field.mul(c, half)
    return m


def _bilinear(field: FieldSpec, m: list[list[Scalar]], x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
    return field.dot(x, [field.dot(row, y) for row in m])


def _quadratic_values(field: FieldSpec, u: Sequence[Scalar]) -> list[Scalar]:
    return [
        field.mul(u[i], u[j])
        for i, j in ([k for k, e in enumerate(exps) for _ in range(e)] for exps in _QUADRATIC)
    ]


def _normalize_vector(field: FieldSpec, v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    return normalize(field, v).coords


@dataclass(frozen=True)
class Conic:
    """
    Conica reduzida num plano de P^r.

    O plano e guardado pela base escalonada reduzida, e a equacao e uma forma
    quadratica nas coordenadas do plano (que sao as coordenadas pivot).
    Conicas lisas guardam um ponto ancora e uma base auxiliar para a
    parametrizacao por projecao a partir da ancora.
    """

    field: FieldSpec
    plane: tuple[tuple[Scalar, ...], ...]
    pivots: tuple[int, ...]
    equation: tuple[Scalar, ...]
    kind: ConicKind
    lines: tuple[Line, Line] | None = None
    anchor: tuple[Scalar, ...] | None = None

    # ============ CONSTRUCAO ============

    @classmethod
    def _from_equation(
        cls,
        field: FieldSpec,
        plane: list[list[Scalar]],
        pivots: list[int],
        equation: Sequence[Scalar],
        on_curve: Sequence[ProjPoint],
    ) -> "Conic | None":
        equation = _normalize_vector(field, equation)
        m = _symmetric_matrix(field, equation)
        rank = mat_rank(Matrix.from_rows(field, m))
        base = dict(field=field, plane=tuple(tuple(r) for r in plane), pivots=tuple(pivots),
                    equation=equation)
        if rank == 3:
            anchor = min(on_curve, key=ProjPoint.sort_key)
            coords = tuple(anchor.coords[p] for p in pivots)
            return cls(kind=ConicKind.SMOOTH, anchor=coords, **base)
        if rank == 2:
            node_plane = kernel_basis(Matrix.from_rows(field, m))[0]
            node = normalize(field, field.linear_combination(node_plane, plane))
            others = [pt for pt in on_curve if pt != node]
            if not others:
                return None
            first = Line.through(node, others[0])
            second_pts = [pt for pt in others if not first.contains(pt)]
            if not second_pts:
                return None
            second = Line.through(node, second_pts[0])
            lines = tuple(sorted((first, second), key=Line.key))
            return cls(kind=ConicKind.TWO_LINES, lines=lines, **base)
        return None

    @classmethod
    def through(cls, points: Sequence[ProjPoint]) -> "Conic | None":
        """
        Conica unica pelos pontos dados (tipicamente 5).

        Returns:
            Conic, ou None se os pontos nao sao coplanares, a conica nao e
            unica ou e uma reta dupla
        """
        field = points[0].field
        plane, pivots = _plane_basis(field, [pt.coords for pt in points])
        if len(plane) != 3:
            return None
        rows = [_quadratic_values(field, [pt.coords[p] for p in pivots]) for pt in points]
        kernel = kernel_basis(Matrix.from_rows(field, rows))
        if len(kernel) != 1:
            return None
        return cls._from_equation(field, plane, pivots, kernel[0], points)

    @classmethod
    def from_lines(cls, first: Line, second: Line) -> "Conic | None":
        """Conica redutivel L1 uniao L2 (None se as retas nao sao coplanares e distintas)."""
        field = first.field
        plane, pivots = _plane_basis(field, list(first.base) + list(second.base))
        if len(plane) != 3:
            return None
        forms = []
        for line in (first, second):
            coords = [[row[p] for p in pivots] for row in line.base]
            forms.append(kernel_basis(Matrix.from_rows(field, coords))[0])
        l1, l2 = forms
        equation = []
        for exps in _QUADRATIC:
            i, j = [k for k, e in enumerate(exps) for _ in range(e)]
            value = field.mul(l1[i], l2[j])
            if i != j:
                value = field.add(value, field.mul(l1[j], l2[i]))
            equation.append(value)
        node = first.intersection(second)
        on_curve = [node] + list(first.base_points) + list(second.base_points)
        return cls._from_equation(field, plane, pivots, equation, on_curve)

    # ============ CONSULTA ============

    @property
    def param_degree(self) -> int:
        return 2

    def key(self) -> tuple:
        return (self.plane, self.equation)

    def plane_coords(self, point: ProjPoint) -> list[Scalar] | None:
        """Coordenadas no plano, ou None se o ponto esta fora do plano."""
        field = self.field
        rest = list(point.coords)
        for row, piv in zip(self.plane, self.pivots):
            c = rest[piv]
            if c != 0:
                rest = field.combine(rest, c, row)
        if any(x != 0 for x in rest):
            return None
        return [point.coords[p] for p in self.pivots]

    def contains(self, point: ProjPoint) -> bool:
        u = self.plane_coords(point)
        if u is None:
            return False
        return self.field.dot(self.equation, _quadratic_values(self.field, u)) == 0

    @property
    def node(self) -> ProjPoint | None:
        """Ponto singular de uma conica redutivel."""
        if self.lines is None:
            return None
        return self.lines[0].intersection(self.lines[1])

    # ============ PARAMETRIZACAO (conica lisa) ============

    def _frame(self) -> tuple[list[list[Scalar]], list[Scalar], list[Scalar], list[Scalar]]:
        """Matriz simetrica, ancora o e base auxiliar e1, e2 do plano."""
        if self.kind is not ConicKind.SMOOTH or self.anchor is None:
            raise InputError("Parametrizacao so existe para conicas lisas")
        field = self.field
        m = _symmetric_matrix(field, self.equation)
        o = list(self.anchor)
        units = [[field.one if i == j else field.zero for j in range(3)] for i in range(3)]
        for i in range(3):
            for j in range(i + 1, 3):
                if mat_rank(Matrix.from_rows(field, [o, units[i], units[j]])) == 3:
                    return m, o, units[i], units[j]
        raise InputError("Ancora degenerada")

    def param_components(self) -> list[BinaryCoefficients]:
        """
        phi(s,t) = Q(v) o - 2 B(o,v) v com v = s e1 + t e2, em coordenadas de P^r.
        """
        field = self.field
        m, o, e1, e2 = self._frame()
        two = field.coerce(2)
        q1 = _bilinear(field, m, e1, e1)
        q2 = _bilinear(field, m, e2, e2)
        b12 = _bilinear(field, m, e1, e2)
        bo1 = _bilinear(field, m, o, e1)
        bo2 = _bilinear(field, m, o, e2)
        ss = field.combine(field.scale(q1, o), field.mul(two, bo1), e1)
        st = field.combine(
            field.combine(field.scale(field.mul(two, b12), o), field.mul(two, bo1), e2),
            field.mul(two, bo2),
            e1,
        )
        tt = field.combine(field.scale(q2, o), field.mul(two, bo2), e2)
        plane_components = list(zip(ss, st, tt))
        components = []
        for k in range(len(self.plane[0])):
            components.append([
                field.dot([row[k] for row in self.plane], [coeffs[j] for coeffs in plane_components])
                for j in range(3)
            ])
        return components

    def point_at(self, param: ProjPoint) -> ProjPoint:
        field = self.field
        s, t = param.coords
        monos = [field.mul(s, s), field.mul(s, t), field.mul(t, t)]
        raw = [field.dot(comp, monos) for comp in self.param_components()]
        return normalize(field, raw)

    def parameter_of(self, point: ProjPoint) -> ProjPoint:
        """
        Parametro (s:t) de um ponto da conica lisa.

        Raises:
            InputError: Ponto fora da conica
        """
        if not self.contains(point):
            raise InputError("Ponto fora da conica")
        field = self.field
        m, o, e1, e2 = self._frame()
        u = self.plane_coords(point)
        coeffs = solve(Matrix.from_columns(field, [o, e1, e2]), u)
        _, c1, c2 = coeffs
        if c1 == 0 and c2 == 0:
            # a propria ancora corresponde a direcao tangente
            return normalize(field, [_bilinear(field, m, o, e2), field.neg(_bilinear(field, m, o, e1))])
        return normalize(field, [c1, c2])
