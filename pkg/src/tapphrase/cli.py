"""Command-line front door: enroll, verify, stream, simulate, stats, serve.

Exit codes: 0 accept/success, 1 reject/no-match, 2 any error. Stdout carries
one machine-parseable JSON object per command; diagnostics go to stderr.
Input files are never modified.
"""

from __future__ import annotations

import json
import socket
import sys

import click

from .errors import TapPhraseError
from .matchers import crude_match, hamming_match, tap_count
from .model import MatcherParams, make_template, total_span, phrase_from_events
from .simulate import (
    JitterModel,
    PhraseGenModel,
    SummaryStats,
    describe,
    estimate_far,
    estimate_frr,
    one_sample_t,
)
from .streaming import AuthSession
from .trace import load_events, load_template, save_template

_param_options = [
    click.option("--bins", default=64, show_default=True, help="Signal resolution."),
    click.option("--tau", default=0.15, show_default=True, help="Accept threshold on Hamming distance."),
    click.option("--span-tolerance", default=0.20, show_default=True, help="Total-span gate width."),
    click.option("--min-segment-ms", default=15.0, show_default=True, help="Debounce floor."),
]


def _with_param_options(f):
    for opt in reversed(_param_options):
        f = opt(f)
    return f


def _fail(exc: Exception) -> None:
    click.echo(f"{type(exc).__name__}: {exc}", err=True)
    sys.exit(2)


def _emit(payload: dict) -> None:
    click.echo(json.dumps(payload))


@click.group()
def main():
    """Tap-phrase authentication toolkit."""


@main.command()
@click.argument("events_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("template_path", type=click.Path(dir_okay=False, writable=True))
@_with_param_options
def enroll(events_path, template_path, bins, tau, span_tolerance, min_segment_ms):
    """Record the trace at EVENTS_PATH as a template at TEMPLATE_PATH."""
    try:
        params = MatcherParams(
            bins=bins, tau=tau, span_tolerance=span_tolerance, min_segment_ms=min_segment_ms
        )
        phrase = phrase_from_events(load_events(events_path))
        template = make_template(phrase, params)
        save_template(template_path, template)
    except TapPhraseError as e:
        _fail(e)
    _emit(
        {
            "id": template.id,
            "tapCount": tap_count(phrase),
            "spanMs": total_span(phrase),
        }
    )


@main.command()
@click.argument("template_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("events_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--matcher", type=click.Choice(["crude", "hamming"]), default="hamming",
              show_default=True)
def verify(template_path, events_path, matcher):
    """One-shot verification of the trace at EVENTS_PATH."""
    try:
        template = load_template(template_path)
        candidate = phrase_from_events(load_events(events_path))
        match = crude_match if matcher == "crude" else hamming_match
        result = match(template, candidate)
    except TapPhraseError as e:
        _fail(e)
    payload = {
        "accepted": result.accepted,
        "gates": {"span": result.span_gate_passed},
        "candidateSpanMs": result.candidate_span_ms,
        "templateSpanMs": result.template_span_ms,
    }
    if result.count_gate_passed is not None:
        payload["gates"]["count"] = result.count_gate_passed
    if result.distance is not None:
        payload["distance"] = result.distance
    _emit(payload)
    sys.exit(0 if result.accepted else 1)


@main.command()
@click.argument("template_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("events_path", type=click.Path(exists=True, dir_okay=False))
def stream(template_path, events_path):
    """Replay EVENTS_PATH through the streaming authenticator."""
    try:
        template = load_template(template_path)
        events = load_events(events_path)
        session = AuthSession(template)
        for i, ev in enumerate(events):
            decision = session.push_event(ev)
            if decision.accepted:
                _emit(
                    {
                        "accepted": True,
                        "eventIndex": i,
                        "t": ev.t,
                        "window": list(decision.matched_window),
                        "distance": decision.result.distance,
                    }
                )
                sys.exit(0)
    except TapPhraseError as e:
        _fail(e)
    click.echo("no match", err=True)
    _emit({"accepted": False})
    sys.exit(1)


@main.command()
@click.argument("template_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--frr", "sigma", type=float, default=None,
              help="Estimate the false-reject rate under this jitter sigma.")
@click.option("--far", "far_flag", is_flag=True,
              help="Estimate the false-accept rate under the random-attacker model.")
@click.option("--trials", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
def simulate(template_path, sigma, far_flag, trials, seed):
    """Monte-Carlo rate estimation against the template."""
    if (sigma is None) == (not far_flag):
        click.echo("exactly one of --frr SIGMA or --far is required", err=True)
        sys.exit(2)
    try:
        template = load_template(template_path)
        if sigma is not None:
            model = JitterModel(sigma=sigma, seed=seed)
            estimate = estimate_frr(template, model, trials)
            model_obj = {"kind": "jitter-replay", "sigma": sigma}
            rate_name = "frr"
        else:
            model = PhraseGenModel(seed=seed)
            estimate = estimate_far(template, model, trials)
            model_obj = {
                "kind": "random-phrase",
                "tapCountRange": list(model.tap_count_range),
                "durationRangeMs": list(model.duration_range_ms),
            }
            rate_name = "far"
    except TapPhraseError as e:
        _fail(e)
    _emit(
        {
            "template": {
                "id": template.id,
                "tapCount": tap_count(template.phrase),
                "spanMs": total_span(template.phrase),
            },
            "params": {
                "bins": template.params.bins,
                "tau": template.params.tau,
                "spanTolerance": template.params.span_tolerance,
                "minSegmentMs": template.params.min_segment_ms,
            },
            "model": model_obj,
            "trials": estimate.trials,
            "seed": estimate.seed,
            "rate": estimate.rate,
            "rateKind": rate_name,
        }
    )


@main.command()
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--mu0", type=float, required=True,
              help="Reference mean to test the sample against.")
def stats(csv_path, mu0):
    """Summary statistics and one-sample t test for a CSV of seconds."""
    try:
        with open(csv_path, encoding="utf-8") as f:
            tokens = [tok for line in f for tok in line.replace(",", " ").split()]
        try:
            samples = [float(tok) for tok in tokens]
        except ValueError as e:
            raise TapPhraseError(f"non-numeric value in {csv_path}: {e}") from None
        desc = describe(samples)
        ttest = one_sample_t(SummaryStats(n=len(samples), mean=desc.mean, sd=desc.sd), mu0)
    except TapPhraseError as e:
        _fail(e)
    _emit(
        {
            "n": len(samples),
            "mean": desc.mean,
            "sd": desc.sd,
            "median": desc.median,
            "iqr": desc.iqr,
            "t": ttest.t,
            "df": ttest.df,
            "cohensD": ttest.cohens_d,
            "mu0": mu0,
        }
    )


@main.command()
@click.option("--port", default=8475, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", envvar="TAPPHRASE_DATA_DIR", default=None,
              help="Directory for template persistence (env: TAPPHRASE_DATA_DIR).")
def serve(port, host, data_dir):
    """Run the local HTTP service until interrupted."""
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    # REUSEADDR matches uvicorn's own bind: a lingering TIME_WAIT socket is
    # fine, an actively listening one is not
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as e:
        click.echo(f"cannot bind {host}:{port}: {e}", err=True)
        sys.exit(2)
    finally:
        probe.close()

    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(data_dir=data_dir), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
