"""
Rank de formas binarias: catalecticantes, rank de fronteira, rank de
Sylvester, extracao de decomposicoes, familias e projecao a partir de nos.

Convencoes:
    - BinaryForm guarda coeficientes polinomiais (indice i <-> x^(d-i) y^i);
      os momentos a_i = coeffs[i] / C(d, i) sao as coordenadas tensoriais.
    - Um vetor h do nucleo de H_k e a forma apolar g = sum h_j alpha^(k-j) beta^j;
      os nos de uma decomposicao sao as raizes (e0:e1) de g.
    - Sobre F_p o rank e o rank F_p-racional: o menor k com um elemento
      livre de quadrados e totalmente decomposto no sistema apolar de grau k.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from sympy import Poly, Rational, Symbol

from src.algebra.field import FieldSpec, Scalar
from src.algebra.forms import HomogeneousForm, check_characteristic, monomials
from src.algebra.linalg import Matrix, Vector, kernel_basis, solve
from src.algebra.points import PointSet, ProjPoint, normalize, projective_count, projective_points
from src.config import settings
from src.exceptions import (
    DegenerateProjectionError,
    DimensionMismatchError,
    FamilyEmptyError,
    InputError,
    NonSplitApolarError,
    NoSplitWitnessError,
    NotMinimalCertificateError,
    ZeroFormError,
)
from src.geometry.veronese import veronese_vectors
from src.utils.helpers import in_seed_class, make_rng, take_seed_batch

logger = logging.getLogger(__name__)

_BETA = Symbol("beta")


# ============ TIPOS ============

@dataclass(frozen=True)
class BinaryForm:
    """Forma binaria nao nula de grau d."""

    field: FieldSpec
    d: int
    coeffs: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.d + 1:
            raise DimensionMismatchError(f"Forma de grau {self.d} exige {self.d + 1} coeficientes")
        coerced = tuple(self.field.coerce(c) for c in self.coeffs)
        if all(c == 0 for c in coerced):
            raise ZeroFormError("Forma binaria nula")
        object.__setattr__(self, "coeffs", coerced)

    @classmethod
    def from_moments(cls, field: FieldSpec, d: int, moments: Sequence[Scalar]) -> "BinaryForm":
        """Forma cujas coordenadas tensoriais sao moments."""
        check_characteristic(field, d)
        return cls(field, d, tuple(
            field.mul(field.coerce(m), field.coerce(comb(d, i))) for i, m in enumerate(moments)
        ))

    @classmethod
    def from_form(cls, form: HomogeneousForm) -> "BinaryForm":
        if form.r != 1:
            raise DimensionMismatchError(f"Forma binaria exige r=1 (recebido r={form.r})")
        return cls(form.field, form.d, tuple(form.coefficient_vector()))

    def to_form(self) -> HomogeneousForm:
        return HomogeneousForm(self.field, 1, self.d, tuple(zip(monomials(1, self.d), self.coeffs)))

    def moments(self) -> list[Scalar]:
        """Coordenadas tensoriais a_i = coeffs[i] / C(d, i)."""
        check_characteristic(self.field, self.d)
        return [
            self.field.div(c, self.field.coerce(comb(self.d, i)))
            for i, c in enumerate(self.coeffs)
        ]

    def evaluate(self, point: ProjPoint) -> Scalar:
        return _evaluate(self.field, self.coeffs, point.coords)


@dataclass(frozen=True)
class BinaryAnalysis:
    """
    Resultado da analise de Sylvester.

    rank e o rank sobre o corpo das coordenadas; generic_rank e o valor de
    Sylvester sobre o fecho algebrico (t ou d+2-t).
    """

    form: BinaryForm
    border_rank: int
    rank: int
    apolar_low: BinaryForm
    family_dim: int
    generic_rank: int
    apolar_system: tuple[tuple[Scalar, ...], ...]
    witness: BinaryForm
    witness_nodes: PointSet


@dataclass(frozen=True)
class BinaryDecomposition:
    """Nos distintos em P^1 e pesos nao nulos (ordem canonica dos nos)."""

    form: BinaryForm
    nodes: PointSet
    weights: tuple[Scalar, ...]

    @property
    def size(self) -> int:
        return len(self.nodes)

    def node_key(self) -> tuple:
        return tuple(pt.coords for pt in self.nodes)

    def reconstruction(self) -> list[Scalar]:
        """Momentos de sum w_i nu_d(node_i)."""
        vectors = veronese_vectors(list(self.nodes), self.form.d)
        return self.form.field.linear_combination(list(self.weights), vectors)


# ============ RAIZES ============

def _evaluate(field: FieldSpec, h: Sequence[Scalar], coords: Sequence[Scalar]) -> Scalar:
    k = len(h) - 1
    return field.dot(h, veronese_vectors([ProjPoint(field, tuple(coords))], k)[0])


@lru_cache(maxsize=64)
def _p1_table(field: FieldSpec, k: int) -> tuple[tuple[ProjPoint, tuple[Scalar, ...]], ...]:
    points = projective_points(field, 1)
    return tuple(zip(points, (tuple(v) for v in veronese_vectors(points, k))))


def _dehomogenized(field: FieldSpec, h: Sequence[Scalar], degree: int) -> Poly:
    """g(1, beta) como polinomio sympy."""
    coeffs = list(reversed(h[: degree + 1]))
    if field.is_prime:
        return Poly([int(c) for c in coeffs], _BETA, modulus=field.p)
    return Poly([Rational(c.numerator, c.denominator) for c in map(Fraction, coeffs)], _BETA, domain="QQ")


def _affine_degree(h: Sequence[Scalar]) -> int:
    return max(j for j, c in enumerate(h) if c != 0)


def _to_field(field: FieldSpec, value) -> Scalar:
    """Converte um coeficiente sympy (inteiro simetrico ou racional)."""
    if field.is_prime:
        return int(value) % field.p
    return Fraction(int(value.p), int(value.q))


def split_roots(field: FieldSpec, h: Sequence[Scalar]) -> list[ProjPoint] | None:
    """
    Raizes de g se g e livre de quadrados e totalmente decomposto no corpo.

    Para p pequeno varre P^1(F_p); caso contrario fatoriza com sympy.

    Returns:
        Lista canonica das k raizes distintas, ou None
    """
    k = len(h) - 1
    if all(c == 0 for c in h):
        return None
    if field.is_prime and field.p <= settings.root_scan_limit:
        roots = [pt for pt, nu in _p1_table(field, k) if field.dot(h, nu) == 0]
        return roots if len(roots) == k else None

    degree = _affine_degree(h)
    at_infinity = k - degree
    if at_infinity > 1:
        return None
    roots: list[ProjPoint] = []
    if degree > 0:
        _, factors = _dehomogenized(field, h, degree).factor_list()
        for factor, multiplicity in factors:
            if multiplicity > 1 or factor.degree() > 1:
                return None
            a, b = (_to_field(field, c) for c in factor.all_coeffs())
            roots.append(normalize(field, [field.one, field.neg(field.div(b, a))]))
    if at_infinity:
        roots.append(ProjPoint(field, (field.zero, field.one)))
    return sorted(roots, key=ProjPoint.sort_key)


def is_square_free(field: FieldSpec, h: Sequence[Scalar]) -> bool:
    """g sem raizes multiplas sobre o fecho algebrico (gcd(g, g') constante)."""
    if all(c == 0 for c in h):
        return False
    k = len(h) - 1
    degree = _affine_degree(h)
    if k - degree > 1:
        return False
    if degree == 0:
        return True
    return bool(_dehomogenized(field, h, degree).is_sqf)


# ============ CATALECTICANTES ============

def catalecticant(f: BinaryForm, k: int) -> Matrix:
    """
    Matriz (d-k+1) x (k+1) com H[i][j] = a_{i+j}.

    Os vetores do nucleo sao as formas apolares de grau k.
    """
    if not 0 <= k <= f.d:
        raise InputError(f"Grau de catalecticante fora de [0, {f.d}]: {k}")
    a = f.moments()
    rows = [[a[i + j] for j in range(k + 1)] for i in range(f.d - k + 1)]
    return Matrix.from_rows(f.field, rows)


def apolar_system(f: BinaryForm, k: int) -> list[Vector]:
    """Base do sistema apolar de grau k (todas as formas quando k > d)."""
    field = f.field
    if k > f.d:
        return [[field.one if i == j else field.zero for j in range(k + 1)] for i in range(k + 1)]
    return kernel_basis(catalecticant(f, k))


def border_rank(f: BinaryForm) -> int:
    """Menor k com nucleo nao trivial de H_k; 1 <= t <= (d+2)//2."""
    for k in range(1, f.d + 1):
        if apolar_system(f, k):
            return k
    return f.d + 1


def _candidate_degrees(t: int, d: int) -> list[int]:
    # entre t e d+2-t os elementos sao multiplos da forma apolar minima
    return [t] + list(range(max(t + 1, d + 2 - t), d + 2))


# ============ PESQUISA DE TESTEMUNHAS ============

def _random_p1_point(field: FieldSpec, rng: random.Random) -> ProjPoint:
    if field.is_prime:
        index = rng.randrange(field.p + 1)
        if index == field.p:
            return ProjPoint(field, (0, 1))
        return ProjPoint(field, (1, index))
    bound = settings.rational_search_bound
    return normalize(field, [Fraction(rng.randint(1, bound)), Fraction(rng.randint(-4 * bound, 4 * bound))])


def _enumerate_members(field: FieldSpec, basis: Sequence[Vector]) -> Iterator[Vector]:
    """Todos os elementos projetivos de <basis> sobre F_p, por ordem canonica."""
    if len(basis) == 1:
        yield list(basis[0])
        return
    for weights in projective_points(field, len(basis) - 1):
        yield field.linear_combination(list(weights.coords), basis)


def _box_members(field: FieldSpec, basis: Sequence[Vector]) -> Iterator[Vector]:
    """Combinacoes inteiras em [-B, B] com primeira entrada nao nula positiva."""
    bound = settings.rational_search_bound
    for weights in itertools.product(range(-bound, bound + 1), repeat=len(basis)):
        lead = next((w for w in weights if w != 0), 0)
        if lead <= 0:
            continue
        yield field.linear_combination([Fraction(w) for w in weights], basis)


def _exhaustive_members(field: FieldSpec, basis: Sequence[Vector]) -> list[Vector] | None:
    """Elementos para pesquisa exaustiva, ou None se o sistema e grande demais."""
    cap = settings.exhaustive_search_cap
    if field.is_prime:
        if projective_count(field.p, len(basis) - 1) > cap:
            return None
        return list(_enumerate_members(field, basis))
    if (2 * settings.rational_search_bound + 1) ** len(basis) > cap:
        return None
    return list(_box_members(field, basis))


def _pencil_split_members(field: FieldSpec, basis: Sequence[Vector]) -> Iterator[tuple[Vector, list[ProjPoint]]]:
    """
    Elementos decompostos e livres de quadrados de um feixe <b0, b1> sobre F_p.

    Cada ponto x de P^1(F_p) fora da base do feixe anula exatamente um
    elemento, (b1(x) : -b0(x)); um elemento de grau k com k raizes distintas
    e decomposto e livre de quadrados.
    """
    first, second = basis
    k = len(first) - 1
    base: list[ProjPoint] = []
    fibers: dict[tuple, list[ProjPoint]] = {}
    for pt, nu in _p1_table(field, k):
        v0 = field.dot(first, nu)
        v1 = field.dot(second, nu)
        if v0 == 0 and v1 == 0:
            base.append(pt)
            continue
        weights = normalize(field, [v1, field.neg(v0)])
        fibers.setdefault(weights.coords, []).append(pt)
    for coords in sorted(fibers, key=lambda c: ProjPoint(field, c).sort_key()):
        roots = fibers[coords] + base
        if len(roots) == k:
            yield field.linear_combination(list(coords), list(basis)), sorted(roots, key=ProjPoint.sort_key)


def _split_members(field: FieldSpec, basis: Sequence[Vector]) -> Iterator[tuple[Vector, list[ProjPoint]]] | None:
    """Elementos decompostos por ordem canonica, ou None acima do limite exaustivo."""
    if field.is_prime and len(basis) == 2 and projective_count(field.p, 1) <= settings.exhaustive_search_cap:
        return _pencil_split_members(field, basis)
    members = _exhaustive_members(field, basis) if field.is_prime else None
    if members is None:
        return None
    return (
        (member, roots)
        for member in members
        if (roots := split_roots(field, member)) is not None
    )


def _sample_member(field: FieldSpec, basis: Sequence[Vector], rng: random.Random) -> Vector | None:
    """
    Sorteia um elemento impondo raizes aleatorias distintas.

    Com m = dim do sistema, impoe m-1 raizes e combina o nucleo das condicoes
    com pesos aleatorios.
    """
    m = len(basis)
    k = len(basis[0]) - 1
    wanted = min(m - 1, k)
    chosen: dict[tuple, ProjPoint] = {}
    for _ in range(4 * wanted + 4):
        if len(chosen) == wanted:
            break
        pt = _random_p1_point(field, rng)
        chosen[pt.coords] = pt
    rows = [[_evaluate(field, b, pt.coords) for b in basis] for pt in chosen.values()]
    if rows:
        free = kernel_basis(Matrix.from_rows(field, rows))
    else:
        free = [[field.one if i == j else field.zero for j in range(m)] for i in range(m)]
    if not free:
        return None
    weights = field.linear_combination(
        [field.random_element(rng, nonzero=True) for _ in free], free,
    )
    member = field.linear_combination(weights, basis)
    if all(c == 0 for c in member):
        return None
    return member


def _find_split_member(
    field: FieldSpec,
    basis: Sequence[Vector],
    rng: random.Random,
) -> tuple[Vector, list[ProjPoint]] | None:
    k = len(basis[0]) - 1
    if field.is_prime and k > field.p + 1:
        return None
    members = _exhaustive_members(field, basis)
    if members is not None:
        for member in members:
            roots = split_roots(field, member)
            if roots is not None:
                return member, roots
        if field.is_prime:
            return None
    attempts = settings.family_retry_factor * 16
    for _ in range(attempts):
        member = _sample_member(field, basis, rng)
        if member is None:
            continue
        roots = split_roots(field, member)
        if roots is not None:
            return member, roots
    logger.debug("Nenhum elemento decomposto em grau %d apos %d sorteios", k, attempts)
    return None


# ============ SYLVESTER ============

@lru_cache(maxsize=512)
def sylvester_analyze(f: BinaryForm) -> BinaryAnalysis:
    """
    Rank de fronteira, rank e sistema apolar da forma.

    Raises:
        NonSplitApolarError: Nenhum grau pesquisado tem testemunha decomposta
    """
    field = f.field
    t = border_rank(f)
    low = apolar_system(f, t)
    apolar_low = BinaryForm(field, t, tuple(low[0]))
    generic = t if 2 * t == f.d + 2 or is_square_free(field, low[0]) else f.d + 2 - t
    rng = make_rng(0, "sylvester", field.label, f.d, *f.coeffs)

    for k in _candidate_degrees(t, f.d):
        basis = low if k == t else apolar_system(f, k)
        found = _find_split_member(field, basis, rng)
        logger.debug("Grau %d: sistema de dimensao %d, testemunha=%s", k, len(basis), found is not None)
        if found is None:
            continue
        member, roots = found
        return BinaryAnalysis(
            form=f,
            border_rank=t,
            rank=k,
            apolar_low=apolar_low,
            family_dim=len(basis) - 1,
            generic_rank=generic,
            apolar_system=tuple(tuple(v) for v in basis),
            witness=BinaryForm(field, k, tuple(member)),
            witness_nodes=PointSet.of(roots),
        )
    raise NonSplitApolarError(
        f"Nenhuma forma apolar livre de quadrados e decomposta sobre {field.label}",
        {"border_rank": t, "degree": f.d},
    )


def decompose_at_nodes(f: BinaryForm, nodes: Sequence[ProjPoint]) -> BinaryDecomposition | None:
    """Pesos de f nos nos dados (None se nao reconstroi ou algum peso e zero)."""
    node_set = PointSet.of(nodes)
    columns = veronese_vectors(list(node_set), f.d)
    weights = solve(Matrix.from_columns(f.field, columns), f.moments())
    if weights is None or any(w == 0 for w in weights):
        return None
    return BinaryDecomposition(f, node_set, tuple(weights))


def sylvester_decompose(f: BinaryForm) -> BinaryDecomposition:
    """
    Decomposicao minima a partir da testemunha de grau rank.

    Raises:
        NoSplitWitnessError: Sem testemunha decomposta no corpo
    """
    try:
        analysis = sylvester_analyze(f)
    except NonSplitApolarError as e:
        raise NoSplitWitnessError(e.message, e.details) from e
    dec = decompose_at_nodes(f, list(analysis.witness_nodes))
    if dec is None:
        raise NoSplitWitnessError("Testemunha nao reconstroi a forma")
    return dec


def decomposition_family(
    f: BinaryForm,
    count: int,
    seed: int,
    avoid: PointSet | None = None,
) -> list[BinaryDecomposition]:
    """
    Ate count decomposicoes minimas distintas de f.

    Com family_dim = 0 a decomposicao e unica e e retornada sozinha. Sistemas
    pequenos sao percorridos por ordem canonica e a seed escolhe a janela
    [seed * count, (seed + 1) * count); os grandes sao amostrados e
    repartidos por hash dos nos, com seeds de restos distintos modulo
    settings.family_batch_stride em classes disjuntas.

    Args:
        f: Forma binaria
        count: Tamanho pedido
        seed: Seed do lote
        avoid: Nos proibidos (decomposicoes que os tocam sao descartadas)

    Raises:
        FamilyEmptyError: Nenhum elemento do sistema apolar de grau rank
            produziu uma decomposicao
    """
    if count <= 0:
        return []
    avoid = avoid or PointSet()
    try:
        analysis = sylvester_analyze(f)
    except NonSplitApolarError as e:
        raise FamilyEmptyError(e.message, e.details) from e
    if analysis.family_dim == 0:
        dec = sylvester_decompose(f)
        if not dec.nodes.intersection(avoid).is_empty():
            raise FamilyEmptyError("A decomposicao unica toca os nos proibidos")
        return [dec]

    field = f.field
    stride = settings.family_batch_stride
    basis = [list(v) for v in analysis.apolar_system]

    def admissible(roots: list[ProjPoint]) -> BinaryDecomposition | None:
        if any(pt in avoid for pt in roots):
            return None
        return decompose_at_nodes(f, roots)

    found: dict[tuple, BinaryDecomposition] = {}
    members = _split_members(field, basis)
    if members is not None:
        valid = (dec for _, roots in members if (dec := admissible(roots)) is not None)
        for dec in take_seed_batch(valid, seed, count):
            found.setdefault(dec.node_key(), dec)
    else:
        rng = make_rng(seed, "binary-family", field.label, *f.coeffs)
        for _ in range(settings.family_retry_factor * count * stride):
            if len(found) >= count:
                break
            member = _sample_member(field, basis, rng)
            roots = split_roots(field, member) if member is not None else None
            dec = admissible(roots) if roots is not None else None
            if dec is not None and in_seed_class(dec.node_key(), seed, stride):
                found.setdefault(dec.node_key(), dec)

    if not found:
        raise FamilyEmptyError("Nenhuma decomposicao encontrada no sistema apolar", {"rank": analysis.rank})
    if len(found) < count:
        logger.warning("Familia binaria com %d de %d decomposicoes pedidas", len(found), count)
    return list(found.values())


# ============ PROJECAO ============

def project_from_nodes(f: BinaryForm, E: PointSet) -> BinaryForm:
    """
    Contrai f pelo produto das formas lineares que se anulam em E.

    Para um no e = (e0:e1) a forma e h = (e1, -e0) e b_i = e1 a_i - e0 a_{i+1}.

    Raises:
        InputError: #E > d - 2
        DegenerateProjectionError: Contracao nula
    """
    if E.is_empty():
        return f
    if any(pt.r != 1 for pt in E):
        raise DimensionMismatchError("Nos de projecao devem estar em P^1")
    if len(E) > f.d - 2:
        raise InputError(f"Projecao exige d - #E >= 2 (d={f.d}, #E={len(E)})")
    field = f.field
    a = f.moments()
    for e in E:
        e0, e1 = e.coords
        a = [field.sub(field.mul(e1, a[i]), field.mul(e0, a[i + 1])) for i in range(len(a) - 1)]
    if all(x == 0 for x in a):
        raise DegenerateProjectionError("Contracao nula: E contem o suporte do esquema minimo")
    return BinaryForm.from_moments(field, f.d - len(E), a)


def lift_decomposition(f: BinaryForm, E: PointSet, U: BinaryDecomposition) -> BinaryDecomposition:
    """
    Levanta uma decomposicao U da forma projetada para U uniao E.

    Raises:
        NotMinimalCertificateError: U toca E ou U uniao E nao reconstroi f
    """
    if not U.nodes.intersection(E).is_empty():
        raise NotMinimalCertificateError("Nos levantados intersectam E")
    dec = decompose_at_nodes(f, list(U.nodes.union(E)))
    if dec is None:
        raise NotMinimalCertificateError(
            "U uniao E nao decompoe a forma",
            {"nodes": len(U.nodes) + len(E)},
        )
    return dec


def lifted_family(f: BinaryForm, E: PointSet, count: int, seed: int) -> list[BinaryDecomposition]:
    """
    Decomposicoes U uniao E de f, com U a percorrer a familia da forma
    projetada a partir de E.

    Os U que tocam E nao levantam (U uniao E teria menos de rank pontos) e
    ficam de fora da familia projetada.

    Raises:
        InputError: #E > d - 2
        DegenerateProjectionError: Contracao nula
        FamilyEmptyError: Nenhum U disjunto de E
    """
    projected = project_from_nodes(f, E)
    family = decomposition_family(projected, count, seed, avoid=E)
    return [lift_decomposition(f, E, U) for U in family]
