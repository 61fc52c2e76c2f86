"""CLI principal - Waring Rank."""

import functools
import time
from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from src import __version__
from src.algebra.field import FieldSpec, parse_field_spec
from src.algebra.forms import form_to_vector, parse_form
from src.api.models import RankMethod, Report
from src.api.serializers import (
    binary_analysis_to_model,
    binary_decomposition_to_model,
    certificate_to_model,
    decomposition_to_model,
    field_to_model,
    points_to_lists,
    read_decomposition,
    report_to_model,
    scalars,
    verdict_to_model,
)
from src.config import settings
from src.exceptions import InputError, WaringRankError
from src.geometry.veronese import AmbientVector, Hypersurface, VeroneseSpace
from src.services.binary import BinaryForm, decomposition_family, sylvester_analyze, sylvester_decompose
from src.services.cert import (
    bgl_uniqueness_probe,
    lemma_v1_check,
    lemma_v2_split,
    verify_decomposition,
)
from src.services.classify import (
    CaseKind,
    case_c_family,
    classify_decomposition,
    generate_family,
    uniqueness_verdict,
)
from src.services.constructions import build_case_a, build_case_b, build_case_c, build_example_i1
from src.services.oracle import OracleBudget, brute_rank, enumerate_S
from src.utils.helpers import truncate_string
from src.utils.logging import configure_logging, stderr_console

console = Console()


def handle_errors(func):
    """Converte WaringRankError em mensagem no stderr e codigo de saida."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except WaringRankError as e:
            stderr_console.print(f"[red]Erro:[/red] {e.message}", markup=True, highlight=False)
            for key, value in e.details.items():
                stderr_console.print(f"  {key}: {truncate_string(str(value), 200)}", highlight=False)
            raise SystemExit(e.exit_code)

    return wrapper


# ============ OPCOES COMUNS ============

def field_option(func):
    return click.option(
        "--field", "field_text",
        help="Corpo: 'q' (racionais) ou 'p=101' (F_p). Padrao: WARINGRANK_DEFAULT_PRIME",
    )(func)


def output_options(func):
    func = click.option("--output", "-o", type=click.Path(dir_okay=False), help="Escrever o JSON neste ficheiro")(func)
    func = click.option("--json/--no-json", "as_json", default=True, help="JSON no stdout ou resumo em tabela")(func)
    return func


def seed_option(func):
    return click.option("--seed", default=0, type=int, show_default=True, help="Seed da invocacao")(func)


def budget_options(func):
    func = click.option("--oracle-budget", type=int, help="Maximo de subconjuntos visitados pelo oracle")(func)
    func = click.option("--oracle-points", type=int, help="Maximo de pontos de P^r(F_p) enumerados")(func)
    return func


def _field(field_text: str | None) -> FieldSpec:
    return parse_field_spec(field_text, settings.default_prime)


def _budget(oracle_points: int | None, oracle_budget: int | None) -> OracleBudget:
    kwargs = {}
    if oracle_points is not None:
        kwargs["max_points"] = oracle_points
    if oracle_budget is not None:
        kwargs["max_subsets"] = oracle_budget
    return OracleBudget(**kwargs)


def _target(
    field: FieldSpec,
    form_text: str | None,
    vector_text: str | None,
    space: tuple[int, int] | None,
) -> tuple[AmbientVector, VeroneseSpace]:
    """
    Alvo a partir de --form ou --vector.

    Raises:
        InputError: Nenhuma ou ambas as entradas, ou --vector sem --space
    """
    if (form_text is None) == (vector_text is None):
        raise InputError("Indique exatamente um de --form/--binary ou --vector")
    if vector_text is not None:
        if not space:
            raise InputError("--vector exige --space r d")
        coords = tuple(field.parse_scalar(x) for x in vector_text.split(","))
        target_space = VeroneseSpace(*space)
        if len(coords) != target_space.N + 1:
            raise InputError(f"--vector com {len(coords)} coordenadas (esperado {target_space.N + 1})")
        return AmbientVector(field, coords), target_space
    form = parse_form(form_text, field, r=space[0] if space else None)
    if space and form.d != space[1]:
        raise InputError(f"Forma de grau {form.d} com --space d={space[1]}")
    return AmbientVector(field, tuple(form_to_vector(form))), VeroneseSpace(form.r, form.d)


def _binary(field: FieldSpec, text: str) -> BinaryForm:
    return BinaryForm.from_form(parse_form(text, field, r=1))


def _emit(report: Report, as_json: bool, output: str | None, summary: dict | None = None) -> None:
    """Escreve o relatorio (JSON ou tabela) e opcionalmente o ficheiro."""
    text = report.to_json()
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
        stderr_console.print(f"[green]Relatorio escrito em:[/green] {output}")
    if as_json:
        click.echo(text)
        return

    table = Table(title=report.command)
    table.add_column("Campo")
    table.add_column("Valor")
    rows = summary if summary is not None else report.result
    for key, value in rows.items():
        table.add_row(key, truncate_string(str(value), 80))
    table.add_row("tempo", f"{report.elapsed_seconds:.3f}s")
    console.print(table)


class _Timer:
    def __init__(self) -> None:
        self.start = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return round(time.perf_counter() - self.start, 6)


@click.group()
@click.version_option(version=__version__, prog_name="waringrank")
@click.option("--log-level", help="Nivel de logging (DEBUG, INFO, WARNING)")
def cli(log_level):
    """Waring Rank - Decomposicoes de tensores simetricos.

    Calcula ranks simetricos exatos, decomposicoes minimas e certificados
    de (nao) unicidade sobre Q e F_p.
    """
    configure_logging(log_level)


# ============ RANK ============

@cli.command()
@click.option("--binary", "binary_text", help="Forma binaria em x0, x1 (metodo de Sylvester)")
@click.option("--form", "form_text", help="Forma em x0..xr (metodo oracle)")
@click.option("--vector", "vector_text", help="Coordenadas tensoriais separadas por virgulas")
@click.option("--space", nargs=2, type=int, help="r d")
@field_option
@budget_options
@output_options
@handle_errors
def rank(binary_text, form_text, vector_text, space, field_text, oracle_points, oracle_budget, as_json, output):
    """Rank simetrico exato (Sylvester se r=1, forca bruta caso contrario)."""
    timer = _Timer()
    field = _field(field_text)
    inputs = {"binary": binary_text, "form": form_text, "vector": vector_text, "space": list(space) if space else None}

    if binary_text is not None:
        analysis = sylvester_analyze(_binary(field, binary_text))
        result = {"rank": analysis.rank, "method": RankMethod.SYLVESTER.value,
                  "analysis": binary_analysis_to_model(analysis).model_dump(mode="json")}
    else:
        target, target_space = _target(field, form_text, vector_text, space)
        if target_space.r == 1 and not (field.is_prime and field.p <= target_space.d):
            form = BinaryForm.from_moments(field, target_space.d, target.coords)
            analysis = sylvester_analyze(form)
            result = {"rank": analysis.rank, "method": RankMethod.SYLVESTER.value,
                      "analysis": binary_analysis_to_model(analysis).model_dump(mode="json")}
        else:
            value = brute_rank(target, target_space, field, _budget(oracle_points, oracle_budget))
            result = {"rank": value, "method": RankMethod.ORACLE.value}

    report = Report(command="rank", field=field_to_model(field), inputs=inputs, result=result,
                    elapsed_seconds=timer.elapsed)
    _emit(report, as_json, output, {"rank": result["rank"], "method": result["method"]})


# ============ DECOMPOSE ============

@cli.command()
@click.option("--binary", "binary_text", required=True, help="Forma binaria em x0, x1")
@field_option
@output_options
@handle_errors
def decompose(binary_text, field_text, as_json, output):
    """Decomposicao minima de uma forma binaria (algoritmo de Sylvester)."""
    timer = _Timer()
    field = _field(field_text)
    form = _binary(field, binary_text)
    analysis = sylvester_analyze(form)
    dec = sylvester_decompose(form)
    result = {
        "rank": analysis.rank,
        "analysis": binary_analysis_to_model(analysis).model_dump(mode="json"),
        "decomposition": binary_decomposition_to_model(dec).model_dump(mode="json"),
    }
    report = Report(command="decompose", field=field_to_model(field), inputs={"binary": binary_text},
                    result=result, elapsed_seconds=timer.elapsed)
    _emit(report, as_json, output, {"rank": analysis.rank, "nodes": points_to_lists(dec.nodes)})


# ============ CLASSIFY ============

@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Decomposicao em JSON")
@click.option("--verdict/--no-verdict", default=False, help="Decidir unicidade (gera testemunhas)")
@seed_option
@output_options
@handle_errors
def classify(input_path, verdict, seed, as_json, output):
    """Classifica uma decomposicao (casos A, B, C ou testemunha de unicidade)."""
    timer = _Timer()
    dec = read_decomposition(input_path)
    if verdict:
        outcome = uniqueness_verdict(dec, seed=seed)
        model = verdict_to_model(outcome)
        result = {"verdict": model.model_dump(mode="json")}
        summary = {"verdict": outcome.kind.value, "case": model.report.case if model.report else "-"}
    else:
        report_model = report_to_model(classify_decomposition(dec))
        result = report_model.model_dump(mode="json")
        summary = {"case": report_model.case, "size": report_model.evidence.size,
                   "max_line_points": report_model.evidence.max_line_points}
    report = Report(command="classify", field=field_to_model(dec.field),
                    inputs={"input": str(input_path), "seed": seed, "verdict": verdict},
                    result=result, elapsed_seconds=timer.elapsed)
    _emit(report, as_json, output, summary)


# ============ FAMILY ============

@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), help="Decomposicao em JSON")
@click.option("--binary", "binary_text", help="Forma binaria em x0, x1")
@click.option("--count", default=10, type=int, show_default=True, help="Numero de decomposicoes")
@field_option
@seed_option
@output_options
@handle_errors
def family(input_path, binary_text, count, field_text, seed, as_json, output):
    """Gera decomposicoes distintas da mesma forma (casos A, B, C ou binaria)."""
    timer = _Timer()
    if (input_path is None) == (binary_text is None):
        raise InputError("Indique exatamente um de --input ou --binary")

    if binary_text is not None:
        field = _field(field_text)
        members = decomposition_family(_binary(field, binary_text), count, seed)
        items = [binary_decomposition_to_model(m).model_dump(mode="json") for m in members]
        case = "binary"
    else:
        dec = read_decomposition(input_path)
        field = dec.field
        structure = classify_decomposition(dec)
        if structure.case is CaseKind.CASE_C:
            members = case_c_family(dec, structure, count, seed)
        else:
            members = generate_family(dec, structure, count, seed)
        items = [decomposition_to_model(m).model_dump(mode="json") for m in members]
        case = structure.case.value

    result = {"case": case, "count": len(items), "decompositions": items}
    report = Report(command="family", field=field_to_model(field),
                    inputs={"input": input_path, "binary": binary_text, "count": count, "seed": seed},
                    result=result, elapsed_seconds=timer.elapsed)
    _emit(report, as_json, output, {"case": case, "count": len(items)})


# ============ CERTIFY ============

@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), help="Decomposicao em JSON")
@click.option("--pair", nargs=2, type=click.Path(exists=True, dir_okay=False),
              help="Duas decomposicoes do mesmo alvo")
@click.option("--split", "split_form", help="Hipersuperficie D (forma) para o teste de divisao do span")
@click.option("--uniqueness", is_flag=True, help="Verificar unicidade por forca bruta (rank <= (d+1)/2)")
@budget_options
@output_options
@handle_errors
def certify(input_path, pair, split_form, uniqueness, oracle_points, oracle_budget, as_json, output):
    """Certifica decomposicoes e verifica os lemas de intersecao de spans."""
    timer = _Timer()
    if (input_path is None) == (not pair):
        raise InputError("Indique exatamente um de --input ou --pair")

    result: dict = {}
    if pair:
        first, second = (read_decomposition(p) for p in pair)
        field = first.field
        result["lemma_v1"] = certificate_to_model(lemma_v1_check(first, second)).model_dump(mode="json")
        if split_form:
            D = Hypersurface(parse_form(split_form, field, r=first.space.r))
            result["lemma_v2"] = certificate_to_model(lemma_v2_split(first, second, D)).model_dump(mode="json")
    else:
        dec = read_decomposition(input_path)
        field = dec.field
        result["decomposition"] = certificate_to_model(verify_decomposition(dec)).model_dump(mode="json")
        if uniqueness:
            cert = bgl_uniqueness_probe(dec, _budget(oracle_points, oracle_budget))
            result["uniqueness"] = certificate_to_model(cert).model_dump(mode="json")

    valid = all(c["valid"] for c in result.values())
    result["valid"] = valid
    report = Report(command="certify", field=field_to_model(field),
                    inputs={"input": input_path, "pair": list(pair) if pair else None,
                            "split": split_form, "uniqueness": uniqueness},
                    result=result, elapsed_seconds=timer.elapsed)
    _emit(report, as_json, output, {name: c["valid"] for name, c in result.items() if isinstance(c, dict)})
    if not valid:
        raise SystemExit(5)


# ============ ORACLE ============

@cli.command()
@click.option("--form", "form_text", help="Forma em x0..xr")
@click.option("--vector", "vector_text", help="Coordenadas tensoriais separadas por virgulas")
@click.option("--space", nargs=2, type=int, help="r d")
@click.option("--size", "s", type=int, help="Enumerar todas as decomposicoes com este tamanho (padrao: o rank)")
@click.option("--no-prune", is_flag=True, help="Desativar o corte por dependencia")
@field_option
@budget_options
@output_options
@handle_errors
def oracle(form_text, vector_text, space, s, no_prune, field_text, oracle_points, oracle_budget, as_json, output):
    """Rank e todas as decomposicoes minimas por forca bruta sobre F_p."""
    timer = _Timer()
    field = _field(field_text)
    target, target_space = _target(field, form_text, vector_text, space)
    budget = _budget(oracle_points, oracle_budget)
    size = s if s is not None else brute_rank(target, target_space, field, budget)
    found = enumerate_S(target, size, target_space, field, budget, prune=not no_prune)
    result = {
        "size": size,
        "count": len(found),
        "decompositions": [points_to_lists(A) for A in found],
        "target": scalars(field, target.coords),
    }
    report = Report(command="oracle", field=field_to_model(field),
                    inputs={"form": form_text, "vector": vector_text,
                            "space": list(space) if space else None, "size": s},
                    result=result, elapsed_seconds=timer.elapsed)
    _emit(report, as_json, output, {"size": size, "count": len(found)})


# ============ EXAMPLE I1 ============

@cli.command("example-i1")
@click.option("--degree", "-d", default=6, type=int, show_default=True, help="Grau par >= 6")
@field_option
@seed_option
@output_options
@handle_errors
def example_i1(degree, field_text, seed, as_json, output):
    """Forma de rank 3d/2 com duas decomposicoes numa cubica plana lisa."""
    timer = _Timer()
    field = FieldSpec.prime(settings.i1_prime) if field_text is None else _field(field_text)
    res = build_example_i1(degree, field, seed)
    pair = lemma_v1_check(res.first, res.second)
    verdict = uniqueness_verdict(res.first)
    result = {
        "curve": {"a": res.curve_coefficients[0], "b": res.curve_coefficients[1], "points": res.curve_points},
        "first": decomposition_to_model(res.first).model_dump(mode="json"),
        "second": decomposition_to_model(res.second).model_dump(mode="json"),
        "lemma_v1": certificate_to_model(pair).model_dump(mode="json"),
        "in_curve_count": res.in_curve_count,
        "in_curve_sets": [points_to_lists(A) for A in res.in_curve_sets],
        "off_curve": {"trials": res.off_curve_trials, "found": res.off_curve_found},
        "attempts": res.attempts,
        "verdict": verdict.kind.value,
    }
    report = Report(command="example-i1", field=field_to_model(field),
                    inputs={"degree": degree, "seed": seed}, result=result,
                    elapsed_seconds=timer.elapsed)
    _emit(report, as_json, output, {
        "curve_points": res.curve_points,
        "in_curve_count": res.in_curve_count,
        "off_curve_found": res.off_curve_found,
        "verdict": verdict.kind.value,
    })


# ============ BUILD ============

@cli.command()
@click.argument("case", type=click.Choice(["A", "B", "C"], case_sensitive=False))
@click.option("--degree", "-d", required=True, type=int, help="Grau d")
@click.option("--r", "r", default=2, type=int, show_default=True, help="Dimensao do espaco projetivo")
@click.option("--curve-count", type=int, help="Pontos na reta (A) ou na conica (B)")
@click.option("--off-count", default=0, type=int, show_default=True, help="Pontos fora da curva")
@field_option
@seed_option
@output_options
@handle_errors
def build(case, degree, r, curve_count, off_count, field_text, seed, as_json, output):
    """Constroi uma decomposicao do caso A, B ou C."""
    timer = _Timer()
    field = _field(field_text)
    case = case.upper()
    if case != "C" and curve_count is None:
        raise InputError("Casos A e B exigem --curve-count")
    if case == "A":
        _, dec = build_case_a(degree, r, curve_count, off_count, field, seed)
    elif case == "B":
        _, dec = build_case_b(degree, r, curve_count, off_count, field, seed)
    else:
        _, dec = build_case_c(degree, r, field, seed)
    model = decomposition_to_model(dec)
    report = Report(command="build", field=field_to_model(field),
                    inputs={"case": case, "degree": degree, "r": r, "curve_count": curve_count,
                            "off_count": off_count, "seed": seed},
                    result={"decomposition": model.model_dump(mode="json")},
                    elapsed_seconds=timer.elapsed)
    _emit(report, as_json, output, {"case": case, "size": dec.size,
                                     "valid": model.certificate.valid if model.certificate else "-"})


# ============ CONFIG ============

@cli.command()
def config():
    """Mostra as configuracoes ativas."""
    table = Table(title="Configuracoes")
    table.add_column("Chave")
    table.add_column("Valor", justify="right")
    for key, value in settings.model_dump().items():
        table.add_row(key, str(value))
    console.print(table)


if __name__ == "__main__":
    cli()
