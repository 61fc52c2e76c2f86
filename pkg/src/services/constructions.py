"""
Construtores de instancias: casos A, B e C da classificacao e o exemplo
de nitidez do limite 3d/2 numa cubica plana lisa.

Cada construtor sorteia, certifica e classifica; tentativas falhadas sao
reamostradas com tenacity ate ao limite das settings.
"""

import itertools
import logging
import random
from dataclasses import dataclass

from tenacity import (
    RetryError,
    Retrying,
    retry_if_exception_type,
    retry_if_result,
    stop_after_attempt,
)

from src.algebra.field import FieldSpec, Scalar
from src.algebra.forms import HomogeneousForm
from src.algebra.linalg import IncrementalSpan, row_reduce, subspace_intersect, vectors_rank
from src.algebra.points import (
    PointSet,
    ProjPoint,
    distinct_random_points,
    normalize,
    projective_points,
    random_point,
)
from src.config import settings
from src.exceptions import (
    BudgetExceededError,
    CurveTooSmallError,
    InfeasibleParametersError,
    NotMinimalCertificateError,
    SearchBudgetExceededError,
    WaringRankError,
)
from src.geometry.curves import Line, pullback_matrix
from src.geometry.decomposition import Decomposition, decomposition_from_points
from src.geometry.veronese import AmbientVector, Hypersurface, VeroneseSpace, veronese_vectors
from src.services.binary import (
    BinaryDecomposition,
    BinaryForm,
    decompose_at_nodes,
    decomposition_family,
    sylvester_analyze,
)
from src.services.cert import verify_decomposition
from src.services.classify import CaseKind, classify_decomposition
from src.services.oracle import SubsetCounter, pruned_search
from src.utils.helpers import heavy_line_threshold, in_regime, make_rng

logger = logging.getLogger(__name__)


class _Resample(Exception):
    """Tentativa descartada; o construtor volta a sortear."""


@dataclass(frozen=True)
class ExampleI1Result:
    """Instancia de rank 3d/2 com duas decomposicoes numa cubica plana."""

    target: AmbientVector
    first: Decomposition
    second: Decomposition
    curve: Hypersurface
    curve_coefficients: tuple[int, int]
    curve_points: int
    in_curve_sets: tuple[PointSet, ...]
    off_curve_trials: int
    off_curve_found: int
    attempts: int

    @property
    def in_curve_count(self) -> int:
        return len(self.in_curve_sets)


# ============ AUXILIARES ============

def _require(condition: bool, message: str, **details) -> None:
    if not condition:
        raise InfeasibleParametersError(message, details)


def _require_characteristic(field: FieldSpec, degree: int) -> None:
    _require(
        not field.is_prime or field.p > degree,
        f"Construcao exige p > {degree}",
        p=field.p,
    )


def _resampled(label: str, build, seed: int):
    """Executa build(rng) com reamostragem via tenacity."""
    try:
        for attempt in Retrying(
            retry=retry_if_exception_type(_Resample),
            stop=stop_after_attempt(settings.builder_max_resamples),
            reraise=True,
        ):
            with attempt:
                number = attempt.retry_state.attempt_number
                return build(make_rng(seed, label, number))
    except _Resample as e:
        raise InfeasibleParametersError(
            f"{label}: nenhuma instancia apos {settings.builder_max_resamples} tentativas",
            {"last_reason": str(e)},
        ) from e


def _curve_decomposition(field: FieldSpec, degree: int, k: int, rng: random.Random) -> BinaryDecomposition:
    """
    Forma binaria de grau degree com rank k >= (degree+2)/2 e uma decomposicao.

    Com 2k = degree+2 bastam k nos aleatorios. Acima disso usa t0-2 nos e um
    ponto tangente, t0 = degree+2-k, cuja forma apolar minima tem raiz dupla.
    """
    if field.is_prime and k > field.p + 1:
        raise _Resample("P^1 sem pontos suficientes")
    if 2 * k == degree + 2:
        nodes = distinct_random_points(field, 1, k, rng)
        weights = [field.random_element(rng, nonzero=True) for _ in nodes]
        moments = field.linear_combination(weights, veronese_vectors(nodes, degree))
        form = BinaryForm.from_moments(field, degree, moments)
        dec = decompose_at_nodes(form, nodes)
        try:
            rank = sylvester_analyze(form).rank
        except WaringRankError as e:
            raise _Resample(str(e)) from e
        if dec is None or rank != k:
            raise _Resample("nos aleatorios nao atingem o rank pedido")
        return dec

    t0 = degree + 2 - k
    lam = field.random_element(rng)
    tangent_point = ProjPoint(field, (field.one, lam))
    nodes = [pt for pt in distinct_random_points(field, 1, t0 - 1, rng) if pt != tangent_point][: t0 - 2]
    if len(nodes) < t0 - 2:
        raise _Resample("no coincide com o ponto tangente")
    tangent = [field.mul(field.coerce(i), field.power(lam, i - 1)) if i else field.zero for i in range(degree + 1)]
    vectors = veronese_vectors(nodes + [tangent_point], degree) + [tangent]
    weights = [field.random_element(rng, nonzero=True) for _ in vectors]
    form = BinaryForm.from_moments(field, degree, field.linear_combination(weights, vectors))
    try:
        analysis = sylvester_analyze(form)
    except WaringRankError as e:
        raise _Resample(str(e)) from e
    if analysis.rank != k or analysis.family_dim < 1:
        raise _Resample(f"rank {analysis.rank} em vez de {k}")
    try:
        return decomposition_family(form, 1, rng.randrange(16))[0]
    except WaringRankError as e:
        raise _Resample(str(e)) from e


def _off_points(field: FieldSpec, r: int, count: int, rng: random.Random, avoid) -> list[ProjPoint]:
    points: dict[tuple, ProjPoint] = {}
    for _ in range(64 * (count + 1)):
        if len(points) == count:
            break
        pt = random_point(field, r, rng)
        if not avoid(pt):
            points.setdefault(pt.coords, pt)
    if len(points) < count:
        raise _Resample("pontos fora da curva insuficientes")
    return list(points.values())


def _assemble(
    space: VeroneseSpace,
    curve_vector: list[Scalar],
    curve_points: list[ProjPoint],
    off: list[ProjPoint],
    rng: random.Random,
    expected: CaseKind,
) -> tuple[AmbientVector, Decomposition]:
    field = curve_points[0].field
    scale = field.random_element(rng, nonzero=True)
    off_weights = [field.random_element(rng, nonzero=True) for _ in off]
    total = field.scale(scale, curve_vector)
    if off:
        total = [field.add(x, y) for x, y in zip(total, field.linear_combination(off_weights, veronese_vectors(off, space.d)))]
    target = AmbientVector(field, tuple(total))
    points = PointSet.of(curve_points + off)
    if len(points) != len(curve_points) + len(off):
        raise _Resample("pontos repetidos")
    try:
        dec = decomposition_from_points(target, points, space)
    except NotMinimalCertificateError as e:
        raise _Resample(e.message) from e
    if not verify_decomposition(dec).valid:
        raise _Resample("decomposicao nao certificada")
    try:
        report = classify_decomposition(dec)
    except WaringRankError as e:
        raise _Resample(e.message) from e
    if report.case is not expected:
        raise _Resample(f"classificada como {report.case.value}")
    return target, dec


# ============ CASOS A, B, C ============

def build_case_a(
    d: int,
    r: int,
    line_count: int,
    off_count: int,
    field: FieldSpec,
    seed: int,
) -> tuple[AmbientVector, Decomposition]:
    """
    Instancia do caso A: line_count pontos numa reta e off_count fora dela.

    Raises:
        InfeasibleParametersError: Parametros fora do regime ou sem instancia
    """
    _require(line_count >= heavy_line_threshold(d), "Reta pesada exige teto((d+2)/2) pontos",
             line_count=line_count, d=d)
    _require(line_count <= d, "Uma forma binaria de grau d tem rank <= d", line_count=line_count)
    _require(off_count >= 0 and in_regime(line_count + off_count, d), "Total deve ser < 3d/2")
    _require(r >= 1 and (off_count == 0 or r >= 2), "Pontos fora da reta exigem r >= 2")
    _require_characteristic(field, d)
    space = VeroneseSpace(r, d)

    def build(rng: random.Random):
        p0, p1 = distinct_random_points(field, r, 2, rng)
        line = Line.through(p0, p1)
        binary = _curve_decomposition(field, d, line_count, rng)
        curve_points = [line.point_at(node) for node in binary.nodes]
        M = pullback_matrix(field, line.param_components(), d)
        curve_vector = M.apply(binary.form.moments())
        off = _off_points(field, r, off_count, rng, line.contains)
        return _assemble(space, curve_vector, curve_points, off, rng, CaseKind.CASE_A)

    return _resampled("case-a", build, seed)


def build_case_b(
    d: int,
    r: int,
    conic_count: int,
    off_count: int,
    field: FieldSpec,
    seed: int,
) -> tuple[AmbientVector, Decomposition]:
    """
    Instancia do caso B: conic_count pontos numa conica lisa
    (s:t) -> s^2 q0 + st q1 + t^2 q2 e off_count fora dela.

    Raises:
        InfeasibleParametersError: Parametros fora do regime ou sem instancia
    """
    _require(d >= 4, "Conica pesada exige d >= 4", d=d)
    _require(d + 1 <= conic_count <= 2 * d + 1, "Conica exige d+1 <= pontos <= 2d+1", conic_count=conic_count)
    _require(off_count >= 0 and in_regime(conic_count + off_count, d), "Total deve ser < 3d/2")
    _require(r >= 2, "Conica exige r >= 2", r=r)
    _require_characteristic(field, 2 * d)
    space = VeroneseSpace(r, d)

    def build(rng: random.Random):
        frame = distinct_random_points(field, r, 3, rng)
        if vectors_rank(field, [pt.coords for pt in frame]) != 3:
            raise _Resample("plano degenerado")
        components = [list(c) for c in zip(*(pt.coords for pt in frame))]
        binary = _curve_decomposition(field, 2 * d, conic_count, rng)

        def on_conic(u: ProjPoint) -> ProjPoint:
            s, t = u.coords
            monos = [field.mul(s, s), field.mul(s, t), field.mul(t, t)]
            return normalize(field, [field.dot(comp, monos) for comp in components])

        curve_points = [on_conic(node) for node in binary.nodes]
        M = pullback_matrix(field, components, d)
        curve_vector = M.apply(binary.form.moments())
        conic_set = set(curve_points)
        off = _off_points(field, r, off_count, rng, lambda pt: pt in conic_set)
        return _assemble(space, curve_vector, curve_points, off, rng, CaseKind.CASE_B)

    return _resampled("case-b", build, seed)


def build_case_c(d: int, r: int, field: FieldSpec, seed: int) -> tuple[AmbientVector, Decomposition]:
    """
    Instancia do caso C: (d+1)/2 pontos em cada uma de duas retas coplanares,
    com o ponto comum fora de A.

    Raises:
        InfeasibleParametersError: d par, d < 3 ou r < 2
    """
    _require(d % 2 == 1 and d >= 3, "Caso C exige d impar >= 3", d=d)
    _require(r >= 2, "Caso C exige r >= 2", r=r)
    _require_characteristic(field, d)
    half = (d + 1) // 2
    space = VeroneseSpace(r, d)

    def build(rng: random.Random):
        node, q1, q2 = distinct_random_points(field, r, 3, rng)
        if vectors_rank(field, [node.coords, q1.coords, q2.coords]) != 3:
            raise _Resample("retas coincidentes")
        points: list[ProjPoint] = []
        for direction in (q1, q2):
            line = Line.through(node, direction)
            on_line = [pt for pt in _line_points(line, half + 1, rng) if pt != node][:half]
            if len(on_line) < half:
                raise _Resample("pontos insuficientes na reta")
            points.extend(on_line)
        weights = [field.random_element(rng, nonzero=True) for _ in points]
        curve_vector = field.linear_combination(weights, veronese_vectors(points, d))
        return _assemble(space, curve_vector, points, [], rng, CaseKind.CASE_C)

    return _resampled("case-c", build, seed)


def _line_points(line: Line, count: int, rng: random.Random) -> list[ProjPoint]:
    params = distinct_random_points(line.field, 1, count, rng)
    return [line.point_at(u) for u in params]


# ============ CUBICA PLANA ============

def _cubic(field: FieldSpec, a: int, b: int) -> Hypersurface:
    """y^2 z = x^3 + a x z^2 + b z^3 em (x0, x1, x2) = (x, y, z)."""
    terms = [
        ((0, 2, 1), 1),
        ((3, 0, 0), -1),
        ((1, 0, 2), -a),
        ((0, 0, 3), -b),
    ]
    return Hypersurface(HomogeneousForm(field, 2, 3, tuple(terms)))


def _cubic_points(field: FieldSpec, a: int, b: int) -> list[ProjPoint]:
    p = field.p
    squares: dict[int, list[int]] = {}
    for y in range(p):
        squares.setdefault(y * y % p, []).append(y)
    points = [ProjPoint(field, (0, 1, 0))]
    for x in range(p):
        rhs = (x * x * x + a * x + b) % p
        for y in squares.get(rhs, []):
            points.append(normalize(field, (x, y, 1)))
    return sorted(points, key=ProjPoint.sort_key)


def find_cubic(field: FieldSpec, minimum: int) -> tuple[int, int, list[ProjPoint]]:
    """
    Cubica lisa y^2 z = x^3 + a x z^2 + b z^3 com o menor numero de pontos >= minimum.

    Raises:
        CurveTooSmallError: Nenhuma cubica com pontos suficientes
    """
    if not field.is_prime or field.p <= 3:
        raise CurveTooSmallError("Cubica de Weierstrass exige F_p com p > 3", {"field": field.label})
    p = field.p
    best: tuple[int, int, list[ProjPoint]] | None = None
    for a in range(p):
        for b in range(p):
            if (4 * a ** 3 + 27 * b ** 2) % p == 0:
                continue
            points = _cubic_points(field, a, b)
            if len(points) >= minimum and (best is None or len(points) < len(best[2])):
                best = (a, b, points)
    if best is None:
        raise CurveTooSmallError(
            f"Nenhuma cubica lisa sobre F_{p} com {minimum} pontos",
            {"p": p, "minimum": minimum},
        )
    return best


def _in_curve_search(
    target: AmbientVector,
    points: list[ProjPoint],
    space: VeroneseSpace,
    size: int,
) -> list[PointSet]:
    """Todos os size-subconjuntos da cubica que decompoem o alvo."""
    field = target.field
    images = veronese_vectors(points, space.d)
    _, pivots = row_reduce(field, images, len(images[0]))
    # <nu_d(C)> e injetivo nas colunas pivot
    projected = [[v[c] for c in pivots] for v in images]
    projected_target = AmbientVector(field, tuple(target.coords[c] for c in pivots))
    counter = SubsetCounter(settings.i1_search_budget)
    try:
        return pruned_search(projected_target, size, points, projected, counter, first_only=False)
    except BudgetExceededError as e:
        raise SearchBudgetExceededError(
            "Pesquisa na cubica excedeu o orcamento",
            {"budget": settings.i1_search_budget, "visited": counter.visited},
        ) from e


def _off_curve_search(
    target: AmbientVector,
    curve_points: list[ProjPoint],
    space: VeroneseSpace,
    size: int,
    rng: random.Random,
) -> int:
    """Sorteios de size-subconjuntos com pontos fora da cubica que decompoem o alvo."""
    field = target.field
    on_curve = set(curve_points)
    universe = projective_points(field, 2)
    off_curve = [pt for pt in universe if pt not in on_curve]
    found = 0
    for _ in range(settings.i1_off_curve_trials):
        outside = rng.randint(1, size)
        chosen = rng.sample(off_curve, outside) + rng.sample(curve_points, size - outside)
        span = IncrementalSpan(field)
        for v in veronese_vectors(chosen, space.d):
            span = span.extend(v) or span
        if span.dim == size and span.contains(target.coords):
            found += 1
    return found


def build_example_i1(d: int, field: FieldSpec | None, seed: int) -> ExampleI1Result:
    """
    P de rank 3d/2 com duas decomposicoes numa cubica plana lisa.

    A uniao A e B das duas decomposicoes e a intersecao completa da cubica
    com uma curva de grau d: escolhem-se 3d-1 pontos e o ultimo e o ponto
    residual. Prefere-se a cubica com menos pontos entre as que tem pelo
    menos 3d+2. P gera a reta comum <nu_d(A)> inter <nu_d(B)>.

    Raises:
        InfeasibleParametersError: d impar ou d < 6
        CurveTooSmallError: Nenhuma cubica com 3d pontos
        SearchBudgetExceededError: Pesquisa na cubica acima do orcamento
    """
    _require(d % 2 == 0 and d >= 6, "Exemplo exige d par >= 6", d=d)
    field = field or FieldSpec.prime(settings.i1_prime)
    try:
        a, b, curve_points = find_cubic(field, 3 * d + 2)
    except CurveTooSmallError:
        a, b, curve_points = find_cubic(field, 3 * d)
    curve = _cubic(field, a, b)
    space = VeroneseSpace(2, d)
    half = 3 * d // 2
    images = veronese_vectors(curve_points, d)
    logger.info("Cubica y^2 z = x^3 + %d x z^2 + %d z^3 com %d pontos", a, b, len(curve_points))

    def attempt_once(number: int) -> ExampleI1Result:
        rng = make_rng(seed, "example-i1", number)
        order = list(range(len(curve_points)))
        rng.shuffle(order)
        base, remaining = order[: 3 * d - 2], order[3 * d - 2 :]
        span = IncrementalSpan(field)
        for i in base:
            span = span.extend(images[i])
            if span is None:
                raise _Resample("pontos escolhidos dependentes")
        chosen, residual = _complete_section(span, base, remaining, images)
        first_idx = chosen[:half]
        second_idx = chosen[half:] + residual
        first_pts = PointSet.of(curve_points[i] for i in first_idx)
        second_pts = PointSet.of(curve_points[i] for i in second_idx)
        meet = _span_meet(field, [images[i] for i in first_idx], [images[i] for i in second_idx])
        if meet is None:
            raise _Resample("intersecao dos spans nao e um ponto")
        target = AmbientVector(field, tuple(meet))
        try:
            first = decomposition_from_points(target, first_pts, space)
            second = decomposition_from_points(target, second_pts, space)
        except NotMinimalCertificateError as e:
            raise _Resample(e.message) from e
        if not (verify_decomposition(first).valid and verify_decomposition(second).valid):
            raise _Resample("decomposicoes nao certificadas")
        found = _in_curve_search(target, curve_points, space, half)
        off_found = _off_curve_search(target, curve_points, space, half, make_rng(seed, "off-curve", number))
        return ExampleI1Result(
            target=target,
            first=first,
            second=second,
            curve=curve,
            curve_coefficients=(a, b),
            curve_points=len(curve_points),
            in_curve_sets=tuple(found),
            off_curve_trials=settings.i1_off_curve_trials,
            off_curve_found=off_found,
            attempts=number,
        )

    retrying = Retrying(
        retry=retry_if_exception_type(_Resample) | retry_if_result(lambda res: res.in_curve_count != 2),
        stop=stop_after_attempt(settings.i1_max_resamples),
    )
    numbers = itertools.count(1)
    try:
        result = retrying(lambda: attempt_once(next(numbers)))
    except RetryError as e:
        last = e.last_attempt
        if last.failed:
            raise InfeasibleParametersError(
                "Exemplo sem instancia valida apos reamostragem",
                {"attempts": settings.i1_max_resamples, "reason": str(last.exception())},
            ) from e
        result = last.result()
        logger.warning("Pesquisa na cubica encontrou %d decomposicoes (esperado 2)", result.in_curve_count)
    return result


def _span_meet(field: FieldSpec, first: list[list[Scalar]], second: list[list[Scalar]]) -> list[Scalar] | None:
    meet = subspace_intersect(field, first, second)
    if len(meet) != 1:
        return None
    return meet[0]


def _complete_section(
    span: IncrementalSpan,
    base: list[int],
    remaining: list[int],
    images: list[list[Scalar]],
) -> tuple[list[int], list[int]]:
    """
    Completa base com um ponto q cujo residual e outro ponto ainda livre.

    Returns:
        Tuple (3d-1 indices escolhidos, [indice residual])
    """
    for q in remaining:
        extended = span.extend(images[q])
        if extended is None:
            continue
        residual = [i for i in remaining if i != q and extended.contains(images[i])]
        if len(residual) == 1:
            return base + [q], residual
    raise _Resample("ponto residual ausente ou repetido")
