"""Command-line interface.

Series files are single-column headerless CSV of floats.  Test subcommands
print JSON to stdout; ``acf``, ``simulate`` and ``dependence`` emit CSV;
``montecarlo`` emits a JSON report to stdout or, with ``--out-dir``, writes
report.json and report.csv plus rendered figures next to them.  Progress and
diagnostics go to stderr.
"""
from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Optional

import click
import numpy as np

from . import __version__
from .bootstrap import BootstrapConfig, bob_test
from .dependence import estimate_delta
from .errors import ConfigError, SerialCorrError
from .estimators import acf as acf_direct
from .estimators import acf_fast
from .harness import ExperimentConfig, emit_report, run_experiment
from .hypotests import NullSpec, l2_test, max_test
from .models import ModelSpec, simulate as simulate_model

_MODEL_PARAM_COUNT = {"iid": 0, "ar1": 1, "bilinear": 2, "arch": 2}


def _read_series(path: str) -> np.ndarray:
    x = np.loadtxt(path, dtype=np.float64, ndmin=1)
    if x.ndim != 1:
        raise click.ClickException(f"{path}: expected a single-column CSV of floats")
    return x


def _read_null(path: Optional[str]) -> Optional[NullSpec]:
    if path is None:
        return None
    return NullSpec(np.loadtxt(path, dtype=np.float64, ndmin=1))


def _parse_model(kind: str, params: Optional[str]) -> ModelSpec:
    want = _MODEL_PARAM_COUNT[kind]
    vals = [float(v) for v in params.split(",")] if params else []
    if len(vals) != want:
        raise click.ClickException(
            f"model {kind!r} takes {want} parameter(s) via --params, got {len(vals)}"
        )
    if kind == "iid":
        return ModelSpec.iid()
    if kind == "ar1":
        return ModelSpec.ar1(vals[0])
    if kind == "bilinear":
        return ModelSpec.bilinear(*vals)
    return ModelSpec.arch(*vals)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(out).write_text(text)


@click.group()
@click.version_option(__version__)
def main():
    """Serial-correlation inference for stationary time series."""


@main.command("acf")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--max-lag", required=True, type=int)
@click.option("--centered", is_flag=True, help="Subtract the full-sample mean.")
@click.option("--fast", is_flag=True, help="Use the transform-accelerated path.")
@click.option("--out", type=click.Path(), default=None, help="Write CSV here instead of stdout.")
def acf_cmd(input_path, max_lag, centered, fast, out):
    """Sample autocovariances/autocorrelations as CSV lag,gamma,rho."""
    x = _read_series(input_path)
    est = (acf_fast if fast else acf_direct)(x, max_lag, centered=centered)
    lines = ["lag,gamma,rho"]
    lines += [f"{k},{float(est.gamma[k])!r},{float(est.rho[k])!r}" for k in range(max_lag + 1)]
    _emit("\n".join(lines) + "\n", out)


@main.command("simulate")
@click.option("--model", "kind", required=True, type=click.Choice(list(_MODEL_PARAM_COUNT)))
@click.option("--params", default=None, help="Comma-separated coefficients, e.g. 0.4,0.4.")
@click.option("--n", required=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("--burn-in", default=1000, type=int, show_default=True)
@click.option("--out", required=True, type=click.Path())
def simulate_cmd(kind, params, n, seed, burn_in, out):
    """Simulate one path and write it as a single-column CSV."""
    model = _parse_model(kind, params)
    ts = simulate_model(model, n, burn_in=burn_in, seed=seed)
    np.savetxt(out, ts.values)
    click.echo(f"wrote {n} values to {out}", err=True)


@main.command("test-max")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--s-n", "s_n", required=True, type=int)
@click.option("--null", "null_path", type=click.Path(exists=True), default=None,
              help="CSV of null correlations r0_1..r0_s (default: white noise).")
@click.option("--alpha", default=0.05, show_default=True, type=float)
@click.option("--uncentered", is_flag=True, help="Skip the mean adjustment.")
def test_max_cmd(input_path, s_n, null_path, alpha, uncentered):
    """Max-deviation test with asymptotic Gumbel calibration; prints JSON."""
    x = _read_series(input_path)
    res = max_test(x, s_n, null=_read_null(null_path), centered=not uncentered)
    click.echo(json.dumps({
        "statistic": res.gumbel_stat,
        "p_value": res.p_value,
        "sigma0_hat": res.sigma0_hat,
        "M": res.M,
        "M_selfnorm": res.M_selfnorm,
        "s_n": res.s_n,
        "t_n": res.t_n,
        "alpha": alpha,
        "decision": "reject" if res.p_value < alpha else "fail-to-reject",
    }, indent=2))


@main.command("test-l2")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--s-n", "s_n", required=True, type=int)
@click.option("--flavor", type=click.Choice(["bp", "lb", "normal"]), default="normal",
              show_default=True)
@click.option("--null", "null_path", type=click.Path(exists=True), default=None)
@click.option("--alpha", default=0.05, show_default=True, type=float)
@click.option("--uncentered", is_flag=True)
def test_l2_cmd(input_path, s_n, flavor, null_path, alpha, uncentered):
    """Quadratic (Box-Pierce-type) test; prints JSON."""
    x = _read_series(input_path)
    res = l2_test(x, s_n, flavor=flavor, null=_read_null(null_path), centered=not uncentered)
    click.echo(json.dumps({
        "statistic": res.T,
        "Q": res.Q,
        "p_value": res.p_value,
        "variance_used": res.variance_used,
        "flavor": res.flavor,
        "s_n": res.s_n,
        "alpha": alpha,
        "decision": "reject" if res.p_value < alpha else "fail-to-reject",
    }, indent=2))


@main.command("bootstrap-test")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--s-n", "s_n", required=True, type=int)
@click.option("--block-len", required=True, type=int)
@click.option("--replicates", required=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("--null", "null_path", type=click.Path(exists=True), default=None)
@click.option("--summary", is_flag=True, help="Suppress the replicate arrays in the output.")
@click.option("--threads", default=1, show_default=True, type=int)
def bootstrap_test_cmd(input_path, s_n, block_len, replicates, seed, null_path, summary, threads):
    """Blocks-of-blocks bootstrap calibration of the max-deviation tests."""
    x = _read_series(input_path)
    config = BootstrapConfig(s_n=s_n, block_len=block_len, replicates=replicates, seed=seed)
    report = bob_test(x, config, null=_read_null(null_path), threads=threads)
    doc = {
        "observed_M": report.observed_M,
        "observed_selfnorm": report.observed_selfnorm,
        "p_value_M": report.p_value_M,
        "p_value_selfnorm": report.p_value_selfnorm,
        "r_e": report.r_e.tolist(),
        "config": {"s_n": s_n, "block_len": block_len, "replicates": replicates, "seed": seed},
    }
    if not summary:
        doc["replicate_M"] = report.replicate_M.tolist()
        doc["replicate_selfnorm"] = report.replicate_selfnorm.tolist()
    click.echo(json.dumps(doc, indent=2))


@main.command("dependence")
@click.option("--model", "kind", required=True, type=click.Choice(list(_MODEL_PARAM_COUNT)))
@click.option("--params", default=None)
@click.option("--p", "p", default=2.0, show_default=True, type=float)
@click.option("--i-max", default=50, show_default=True, type=int)
@click.option("--replicates", default=10000, show_default=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("--out", type=click.Path(), default=None)
def dependence_cmd(kind, params, p, i_max, replicates, seed, out):
    """Physical dependence profile delta_p(i) as CSV i,delta,theta_tail."""
    model = _parse_model(kind, params)
    prof = estimate_delta(model, p=p, i_max=i_max, replicates=replicates, seed=seed)
    lines = ["i,delta,theta_tail"]
    lines += [f"{i},{float(prof.delta[i])!r},{float(prof.theta_tail[i])!r}" for i in range(i_max + 1)]
    _emit("\n".join(lines) + "\n", out)


@main.command("montecarlo")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out-dir", type=click.Path(), default=None,
              help="Write report.json, report.csv and figures into this directory.")
@click.option("--threads", default=None, type=int,
              help="Worker count; beats ACF_THREADS and the config's threads hint.")
def montecarlo_cmd(config_path, out_dir, threads):
    """Run a Monte Carlo experiment from a JSON config (exit 0/2/3)."""
    try:
        config = ExperimentConfig.from_dict(json.loads(Path(config_path).read_text()))
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        click.echo(f"config error: {exc}", err=True)
        raise SystemExit(2)
    if threads is None and "ACF_THREADS" in os.environ:
        threads = int(os.environ["ACF_THREADS"])
    try:
        result = run_experiment(config, threads=max(1, threads) if threads is not None else None)
    except (SerialCorrError, FloatingPointError) as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        raise SystemExit(3)
    if out_dir is None:
        click.echo(emit_report(result, "json"))
        return
    from .figures import ecdf_figure, rejection_figure

    dest = Path(out_dir)
    dest.mkdir(parents=True, exist_ok=True)
    (dest / "report.json").write_text(emit_report(result, "json"))
    (dest / "report.csv").write_text(emit_report(result, "csv"))
    if result.ecdf:
        ecdf_figure(result, str(dest / "ecdf.png"))
    rejection_figure(result, str(dest / "rejections.png"))
    click.echo(emit_report(result, "table"), err=True)
    click.echo(f"report written to {dest}", err=True)


if __name__ == "__main__":
    main()
