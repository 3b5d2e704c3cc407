import functools
import json
import logging
import os
import time

import click

from algebra_service import discr_resultant, structured_discriminant
from algebra_service.discriminant import s_exponent
from algebra_service.errors import AlgebraError

from .config import PipelineSettings, RunConfig, seed_from_env, settings_from_env
from .corpus import builtin_models, get_model
from .errors import ConfigError, HeavyModelRefused, LikelihoodError, ModelError, exit_code_for
from .interpolate import (
    degrees,
    eliminate_groebner,
    eliminate_interpolate,
    estimate_cost,
    structure_constants,
)
from .models import dump_model, likelihood_system, read_model_file, scaled_system
from .sampling import SampleStream

logger = logging.getLogger(__name__)


def _handle_errors(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (AlgebraError, LikelihoodError) as exc:
            code = exit_code_for(exc)
            logger.debug("command failed", exc_info=True)
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            click.get_current_context().exit(code)

    return wrapper


def _model_options(command):
    options = [
        click.option("--model", "model", default=None, help="Built-in model name."),
        click.option("--model-file", "model_file", default=None, type=click.Path(dir_okay=False), help="Path to a model file."),
        click.option("--seed", type=int, default=None, help="64-bit seed; falls back to MLE_ELIM_SEED."),
        click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text"),
        click.option("--gb-budget", type=int, default=None, help="Buchberger pair budget."),
        click.option("--retries", type=int, default=None, help="Retries per pipeline stage."),
        click.option("--workers", type=int, default=None, help="Threads for sample eliminations."),
        click.option("--allow-heavy", is_flag=True, help="Run models marked heavy."),
        click.option("--timings", is_flag=True, help="Append wall-clock milliseconds."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def build_config(command, model=None, model_file=None, seed=None, output_format="text", gb_budget=None,
                 retries=None, workers=None, allow_heavy=False, timings=False, method="interpolate",
                 scaled=False, env=os.environ):
    """Flags override the environment, which overrides the defaults."""
    base = settings_from_env(env)
    settings = PipelineSettings(
        gb_budget=gb_budget if gb_budget is not None else base.gb_budget,
        retries=retries if retries is not None else base.retries,
        workers=workers if workers is not None else base.workers,
    )
    if settings.gb_budget < 1 or settings.retries < 0 or settings.workers < 1:
        raise ConfigError("budgets must be positive and retries non-negative")
    if seed is None:
        seed = seed_from_env(env)
    elif not 0 <= seed < 2 ** 64:
        raise ConfigError(f"seed {seed} is not a 64-bit unsigned integer")
    return RunConfig(command, model, model_file, method, seed, output_format, allow_heavy, scaled, timings, settings)


def resolve_model(cfg, compute=True):
    if (cfg.model is None) == (cfg.model_file is None):
        raise ModelError("pass exactly one of --model or --model-file")
    model = get_model(cfg.model) if cfg.model is not None else read_model_file(cfg.model_file)
    if compute and model.heavy and not cfg.allow_heavy:
        raise HeavyModelRefused(model.name)
    return model


def _emit(cfg, payload, lines):
    if cfg.output_format == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        for line in lines:
            click.echo(line)


def _profile_lines(profile):
    return [
        f"N: {profile.N}",
        "alpha: " + " ".join(map(str, profile.alpha)),
        "L: " + " ".join(map(str, profile.L)),
        "Omega: " + "; ".join(" ".join(map(str, row)) for row in profile.Omega),
    ]


def _export_models(corpus, export_dir):
    try:
        os.makedirs(export_dir, exist_ok=True)
        for model in corpus:
            path = os.path.join(export_dir, f"{model.name}.model")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(dump_model(model))
            logger.info("wrote %s", path)
    except OSError as exc:
        raise ConfigError(f"cannot export models to {export_dir}: {exc}") from exc


def _eliminate(cfg, system, stream):
    if cfg.method == "groebner":
        return eliminate_groebner(system, cfg.settings)
    return eliminate_interpolate(system, cfg.seed, cfg.settings, stream=stream)


def register_commands(app):
    @app.command(help="Print the Lagrange likelihood equations of a model.")
    @_model_options
    @click.option("--scaled", is_flag=True, help="Print the scaled system instead.")
    @_handle_errors
    def equations(scaled, **flags):
        cfg = build_config("equations", scaled=scaled, **flags)
        model = resolve_model(cfg, compute=False)
        system = scaled_system(model) if cfg.scaled else likelihood_system(model)
        payload = {
            "name": model.name,
            "parameters": list(system.parameters),
            "unknowns": list(system.variables),
            "equations": [str(eq) for eq in system.equations],
        }
        lines = [
            f"# model: {model.name}",
            f"# parameters: {', '.join(system.parameters)}",
            f"# unknowns: {', '.join(system.variables)}",
        ] + [str(eq) for eq in system.equations]
        _emit(cfg, payload, lines)

    @app.command(help="Compute the eliminant E_f in the parameters and the first unknown.")
    @_model_options
    @click.option("--method", type=click.Choice(["interpolate", "groebner"]), default="interpolate")
    @_handle_errors
    def eliminate(method, **flags):
        cfg = build_config("eliminate", method=method, **flags)
        model = resolve_model(cfg)
        system = likelihood_system(model)
        started = time.perf_counter()
        result = _eliminate(cfg, system, SampleStream(cfg.seed))
        elapsed = (time.perf_counter() - started) * 1000.0
        logger.info("eliminate %s via %s: %d samples", model.name, cfg.method, result.samples_used)

        payload = {
            "model": model.name,
            "method": result.method,
            "seed": cfg.seed,
            "E_f": str(result.E_f),
            "profile": result.profile.as_dict(),
            "samples_used": result.samples_used,
            "verified": result.verified,
        }
        lines = [f"model: {model.name}", f"method: {result.method}", f"seed: {cfg.seed}", f"E_f: {result.E_f}"]
        lines += _profile_lines(result.profile)
        lines += [f"samples_used: {result.samples_used}", f"verified: {str(result.verified).lower()}"]
        if cfg.timings:
            payload["time_ms"] = round(elapsed, 1)
            lines.append(f"time_ms: {elapsed:.1f}")
        _emit(cfg, payload, lines)

    @app.command(help="Compute the structure constants N, t, l, delta.")
    @_model_options
    @_handle_errors
    def structure(**flags):
        cfg = build_config("structure", **flags)
        model = resolve_model(cfg)
        started = time.perf_counter()
        sc = structure_constants(model, SampleStream(cfg.seed), cfg.settings)
        elapsed = (time.perf_counter() - started) * 1000.0
        payload = dict(sc.as_dict())
        lines = [f"model: {model.name}", f"seed: {cfg.seed}"] + [f"{key}: {value}" for key, value in payload.items()]
        payload = {"model": model.name, "seed": cfg.seed, **payload}
        if cfg.timings:
            payload["time_ms"] = round(elapsed, 1)
            lines.append(f"time_ms: {elapsed:.1f}")
        _emit(cfg, payload, lines)

    @app.command(help="Compute the discriminant of E_f with respect to the first unknown.")
    @_model_options
    @click.option("--method", type=click.Choice(["resultant", "structured"]), default="structured")
    @click.option("--elimination", type=click.Choice(["interpolate", "groebner"]), default="interpolate",
                  help="How E_f itself is obtained.")
    @_handle_errors
    def discriminant(method, elimination, **flags):
        cfg = build_config("discriminant", method=elimination, **flags)
        model = resolve_model(cfg)
        system = likelihood_system(model)
        stream = SampleStream(cfg.seed)
        started = time.perf_counter()
        result = _eliminate(cfg, system, stream)
        p0 = system.first_unknown

        payload = {"model": model.name, "method": method, "seed": cfg.seed}
        lines = [f"model: {model.name}", f"method: {method}", f"seed: {cfg.seed}"]
        if method == "resultant":
            value = discr_resultant(result.E_f, p0)
        else:
            sc = structure_constants(model, stream, cfg.settings)
            value = structured_discriminant(result.E_f, sc, system.data_sum, p0)
            payload["s_exponent"] = s_exponent(sc)
            payload["structure"] = sc.as_dict()
            lines.append(f"s_exponent: {s_exponent(sc)}")
        elapsed = (time.perf_counter() - started) * 1000.0
        payload["discriminant"] = str(value)
        lines.append(f"discriminant: {value}")
        if cfg.timings:
            payload["time_ms"] = round(elapsed, 1)
            lines.append(f"time_ms: {elapsed:.1f}")
        _emit(cfg, payload, lines)

    @app.command(help="Predict the number of sample eliminations the interpolation needs.")
    @_model_options
    @_handle_errors
    def estimate(**flags):
        cfg = build_config("estimate", **flags)
        model = resolve_model(cfg)
        system = likelihood_system(model)
        stream = SampleStream(cfg.seed)
        profile = degrees(system, stream, cfg.settings)
        cost = estimate_cost(system, profile, stream, cfg.settings)
        payload = {"model": model.name, "seed": cfg.seed, "profile": profile.as_dict(), **cost.as_dict()}
        lines = [f"model: {model.name}", f"seed: {cfg.seed}"] + _profile_lines(profile) + [
            "lc_slots: " + " ".join(map(str, cost.lc_slots)),
            "coefficient_slots: " + " ".join(map(str, cost.coefficient_slots)),
            "unstructured_slots: " + " ".join(map(str, cost.unstructured_slots)),
            f"lc_samples: {cost.lc_samples}",
            f"coefficient_samples: {cost.coefficient_samples}",
            f"unstructured_samples: {cost.unstructured_samples}",
        ]
        if cfg.timings:
            lines.append(f"sample_ms: {cost.sample_ms:.1f}")
        else:
            payload.pop("sample_ms")
        _emit(cfg, payload, lines)

    @app.command(help="List the built-in models, or export them as model files.")
    @click.option("--export", "export_dir", default=None, type=click.Path(file_okay=False),
                  help="Write every built-in model to DIR/<name>.model.")
    @click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
    @_handle_errors
    def models(export_dir, output_format):
        corpus = builtin_models()
        if export_dir is not None:
            _export_models(corpus, export_dir)
        if output_format == "json":
            click.echo(json.dumps([
                {"name": m.name, "n": m.n, "s": m.s, "heavy": m.heavy, "description": m.description} for m in corpus
            ], indent=2))
        else:
            for m in corpus:
                flag = " (heavy)" if m.heavy else ""
                click.echo(f"{m.name}: n={m.n} s={m.s}{flag} {m.description}".rstrip())
