"""
Commands on univariate and bivariate integer series: kronecker, reconstruct,
criterion and dfinite
"""

import pandas as pd

from analysis.dfinite import DFiniteSystem, bell_chen_pipeline, generate_coeffs, recurrence_from_ode
from analysis.hankel import default_window, kronecker_test, reconstruct_rational
from analysis.restriction import criterion_test
from analysis.series_core import IntPoly, expand_rational
from utils.error_handler import UsageError, handle_analysis_error, logger
from utils.report_helpers import CommandResult
from utils.series_io import build_bivariate, build_biseries, build_series_1d, load_spec

from .run_config import RunConfig


@handle_analysis_error
def run_kronecker_command(run: RunConfig) -> CommandResult:
    """Hankel-determinanter over et vindu"""
    series = build_series_1d(load_spec(run.input), run.N)
    n_lo, n_hi = default_window(run.degree)
    if run.n_lo is not None:
        n_lo = run.n_lo
    if run.n_hi is not None:
        n_hi = run.n_hi
    report = kronecker_test(series, n_lo, n_hi)
    return CommandResult(
        {'series': series.to_dict(), 'hankel': report.to_dict()},
        report.to_frame(),
    )


@handle_analysis_error
def run_reconstruct_command(run: RunConfig) -> CommandResult:
    """Rasjonal rekonstruksjon med gradgrense --degree"""
    series = build_series_1d(load_spec(run.input), run.N)
    fit = reconstruct_rational(series, run.degree)
    checked_through = 2 * run.degree + 1
    result = {'series': series.to_dict(), 'degree': run.degree, 'fit': fit.to_dict(),
              'checked_through': checked_through}
    if abs(fit.denominator[0]) == 1:
        expansion = expand_rational(fit, series.truncation_order)
        result['matches_full_series'] = expansion.coeffs == series.coeffs
    return CommandResult(result)


@handle_analysis_error
def run_criterion_command(run: RunConfig) -> CommandResult:
    """H_m(w) for m i [--m-lo, --m-hi] med eksponent --n"""
    table = build_biseries(load_spec(run.input), run.N)
    report = criterion_test(table, run.n, run.m_lo, run.m_hi)
    return CommandResult(
        {'series': {'label': table.label, 'truncation_order': table.truncation_order,
                    'convergence_note': table.convergence_note},
         'criterion': report.to_dict()},
        report.to_frame(),
    )


@handle_analysis_error
def run_dfinite_command(run: RunConfig) -> CommandResult:
    """
    Univariate system: recurrence and coefficients. Bivariate system or table:
    the full rationality pipeline.
    """
    spec = load_spec(run.input)
    if not isinstance(spec, dict):
        raise UsageError("Spec må være et JSON-objekt", field="input")
    if spec.get("kind") == "dfinite" and len(spec.get("variables", ["z", "w"])) == 1:
        if run.N is None and "N" not in spec:
            raise UsageError("dfinite krever --N", field="N")
        if run.N is not None and spec.get("N") is not None and int(spec["N"]) != run.N:
            logger.warning(f"--N={run.N} overstyrer N={spec['N']} fra spec")
        N = int(spec["N"] if run.N is None else run.N)
        equations = spec["equations"]
        p = [IntPoly(tuple(c)) for c in (equations[0] if isinstance(equations[0][0], list) else equations)]
        rec = recurrence_from_ode(p)
        generated = generate_coeffs(rec, spec["initials"], N)
        frame = pd.DataFrame({'n': list(range(N + 1)), 'a_n': [str(v) for v in generated.values]})
        return CommandResult({'recurrence': rec.to_dict(), 'coefficients': generated.to_dict()}, frame)

    built = build_bivariate(spec, run.N)
    if run.N is None and not isinstance(built, DFiniteSystem):
        N = built.truncation_order
    elif run.N is None:
        raise UsageError("dfinite krever --N", field="N")
    else:
        N = run.N
    pipeline = bell_chen_pipeline(built, run.n, N, run.m_lo, run.m_hi)
    logger.info(f"Pipeline ferdig: {pipeline.criterion.verdict.value}")
    return CommandResult(pipeline.to_dict(), pipeline.to_frame())
