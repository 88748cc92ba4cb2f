"""
scramblesim CLI - reproducible scrambling experiments.

Every command writes its data as CSV (or JSON) next to a
``<output>.manifest.json`` holding the resolved configuration, seed, time
grid and code version. A run that fails after producing rows leaves a
``<output>.partial.json`` marker with those rows and the error.
"""

import argparse
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Optional

import numpy as np
import structlog

from scramblesim import __version__

if TYPE_CHECKING:
    from scramblesim.config.settings import SimulationConfig

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 4
EXIT_INTERRUPTED = 130


def _float_list(value: str) -> List[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated numbers, got {value!r}")


def _add_sector_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--L", type=int, default=None, help="Physical chain length")
    parser.add_argument("--N", type=int, default=None, help="Particle number")


def _add_experiment_arguments(parser: argparse.ArgumentParser, sampling: bool = True) -> None:
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Experiment file (JSON or YAML); flags override its values",
    )
    _add_sector_arguments(parser)
    parser.add_argument(
        "--t-grid",
        dest="t_grid",
        type=_float_list,
        default=None,
        help="Explicit comma-separated time grid",
    )
    parser.add_argument("--t-min", dest="t_min", type=float, default=None)
    parser.add_argument("--t-max", dest="t_max", type=float, default=None)
    parser.add_argument("--t-count", dest="t_count", type=int, default=None)
    parser.add_argument(
        "--t-spacing",
        dest="t_spacing",
        choices=["linear", "log"],
        default=None,
        help="Spacing of the generated time grid",
    )
    if sampling:
        parser.add_argument("--M-s", dest="M_s", type=int, default=None, help="Samples per time")
        parser.add_argument("--seed", type=int, default=None, help="Run seed (mandatory)")
        parser.add_argument(
            "--sampler",
            choices=["chain_rule", "dpp", "exact"],
            default=None,
            help="Sampling backend",
        )
        parser.add_argument(
            "--initial-state",
            dest="initial_state",
            type=str,
            default=None,
            help="'ground', 'random-product' or a logical bitstring",
        )
        parser.add_argument(
            "--n-initial-states",
            dest="n_initial_states",
            type=int,
            default=None,
            help="Random product states to average over",
        )
    parser.add_argument("--threads", type=int, default=None, help="Worker threads")
    parser.add_argument("-o", "--output", type=str, default=None, help="Output file path")
    parser.add_argument("--format", choices=["csv", "json"], default=None)


def create_parser() -> argparse.ArgumentParser:
    """Create the main argument parser."""
    parser = argparse.ArgumentParser(
        prog="scramblesim",
        description="scramblesim - information scrambling on the constrained fermion chain",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  scramblesim map encode 0011001
  scramblesim spectrum-check --L 12 --N 4
  scramblesim hamming --L 64 --N 8 --t-min 0.1 --t-max 100 --t-count 30 --t-spacing log --seed 7
  scramblesim relax --config relax.yaml --seed 11
  scramblesim nk --L 256 --N 16 --seed 3
  scramblesim otoc --L 16 --N 4 --source-site 3 --t-grid 0,0.5,1,1.5,2 --beta 1
        """,
    )

    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"scramblesim v{__version__}",
    )
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    parser.add_argument(
        "--log-format",
        dest="log_format",
        choices=["console", "json"],
        default=None,
        help="Log renderer (overrides the settings file)",
    )
    parser.add_argument(
        "--settings",
        type=str,
        default=None,
        help="Engine settings file (YAML)",
    )
    parser.add_argument("--progress", action="store_true", help="Show progress bars")

    subparsers = parser.add_subparsers(
        dest="command",
        title="commands",
        description="Available commands",
    )

    # Map command
    map_parser = subparsers.add_parser(
        "map",
        help="Convert between logical and physical bitstrings",
    )
    map_parser.add_argument("direction", choices=["encode", "decode"])
    map_parser.add_argument("bitstring", type=str)

    # Spectrum check command
    spectrum_parser = subparsers.add_parser(
        "spectrum-check",
        help="Compare constrained ED spectrum with logical subset sums",
    )
    _add_sector_arguments(spectrum_parser)
    spectrum_parser.add_argument("--tol", type=float, default=1e-9)
    spectrum_parser.add_argument("--json", action="store_true", help="Output report as JSON")

    # Trajectory commands
    hamming_parser = subparsers.add_parser(
        "hamming",
        help="Hamming distance D(t) averaged over initial states",
    )
    _add_experiment_arguments(hamming_parser)
    hamming_parser.add_argument(
        "--fit-window", dest="fit_window", type=float, nargs=2, default=None
    )

    relax_parser = subparsers.add_parser(
        "relax",
        help="Correlation relaxation Z(t) and natural-orbital occupations",
    )
    _add_experiment_arguments(relax_parser)
    relax_parser.add_argument(
        "--fit-window", dest="fit_window", type=float, nargs=2, default=None
    )
    relax_parser.add_argument("--t-infinity", dest="t_infinity", type=float, default=None)
    relax_parser.add_argument(
        "--average-t-infinity",
        dest="average_t_infinity",
        action="store_true",
        default=None,
        help="Average the reference over log-spaced long times",
    )

    # Momentum command
    nk_parser = subparsers.add_parser(
        "nk",
        help="Ground-state momentum distribution and Luttinger parameter",
    )
    _add_experiment_arguments(nk_parser)

    # OTOC command
    otoc_parser = subparsers.add_parser(
        "otoc",
        help="Thermal OTOC light cone by exact diagonalization",
    )
    _add_experiment_arguments(otoc_parser, sampling=False)
    otoc_parser.add_argument("--source-site", dest="source_site", type=int, default=None)
    otoc_parser.add_argument("--beta", type=float, default=None)
    otoc_parser.add_argument("--threshold", type=float, default=None)
    otoc_parser.add_argument(
        "--lyapunov-window", dest="lyapunov_window", type=float, nargs=2, default=None
    )
    otoc_parser.add_argument(
        "--compare-free",
        action="store_true",
        help="Add the unconstrained XX-chain OTOC as a reference column",
    )

    # Sample command
    sample_parser = subparsers.add_parser(
        "sample",
        help="Draw logical configurations from an evolved state",
    )
    _add_experiment_arguments(sample_parser)
    sample_parser.add_argument("--time", type=float, default=0.0, help="Evolution time")
    sample_parser.add_argument(
        "--save-state", dest="save_state", type=str, default=None,
        help="Also write the evolved Slater state as JSON",
    )

    # Info command
    subparsers.add_parser(
        "info",
        help="Display version and library information",
    )

    return parser


def _experiment(args: argparse.Namespace):
    """Resolve an ExperimentConfig from --config and flags."""
    from scramblesim.config.experiment import ExperimentConfig

    overrides = {
        name: getattr(args, name)
        for name in ExperimentConfig.model_fields
        if getattr(args, name, None) is not None
    }
    if getattr(args, "config", None):
        return ExperimentConfig.from_file(args.config, **overrides)
    return ExperimentConfig.model_validate(overrides)


def _settings(args: argparse.Namespace) -> "SimulationConfig":
    """Engine settings: defaults, then the --settings file, then SCRAMBLESIM_* variables."""
    from scramblesim.config.settings import SimulationConfig

    return SimulationConfig.from_yaml(args.settings) if args.settings else SimulationConfig()


def _engine_config(args: argparse.Namespace, experiment) -> "SimulationConfig":
    """Engine settings with the values this run sets explicitly on top."""
    explicit = experiment.model_fields_set
    overrides = {
        name: getattr(experiment, name)
        for name in ("sampler", "threads", "t_infinity", "average_t_infinity")
        if name in explicit
    }
    return _settings(args).with_overrides(show_progress=args.progress or None, **overrides)


def _output_path(experiment, command: str) -> Path:
    if experiment.output:
        return Path(experiment.output)
    return Path(f"{command}_L{experiment.L}_N{experiment.N}.{experiment.format}")


def _sidecar(output: Path, suffix: str) -> Path:
    return output.with_name(f"{output.stem}.{suffix}")


def _manifest(command: str, experiment, engine, **extra: Any) -> Dict[str, Any]:
    return {
        "command": command,
        "config": experiment.to_manifest(),
        "engine": engine.to_dict(),
        "seed": experiment.seed,
        **extra,
    }


@contextmanager
def _partial_on_failure(output: Path, command: str, rows: List[Any]):
    """Leave ``<output>.partial.json`` behind when the body raises."""
    from scramblesim.utils.io import write_json

    try:
        yield
    except BaseException as e:
        marker = output.with_name(output.name + ".partial.json")
        write_json(
            marker,
            {
                "command": command,
                "error": str(e) or type(e).__name__,
                "error_type": type(e).__name__,
                "completed_rows": rows,
            },
        )
        logger.warning("Run aborted, partial marker written", marker=str(marker))
        raise


def _try_fit(name: str, fit, *args, **kwargs) -> Dict[str, Any]:
    """Run a fit; failures are reported in the fit output instead of aborting."""
    from scramblesim.exceptions.errors import FitFailureError

    try:
        return fit(*args, **kwargs).to_dict()
    except (FitFailureError, ValueError) as e:
        logger.warning("Fit failed", model=name, error=str(e))
        return {"model": name, "error": str(e)}


def cmd_map(args: argparse.Namespace) -> int:
    """Execute the map command."""
    from scramblesim.mapping.bijection import logical_to_physical, physical_to_logical
    from scramblesim.mapping.configs import LogicalConfig
    from scramblesim.utils.validators import validate_bitstring

    bits = validate_bitstring(args.bitstring)
    if args.direction == "encode":
        print(logical_to_physical(LogicalConfig.from_string(bits)))
    else:
        print(physical_to_logical(bits))
    return EXIT_OK


def cmd_spectrum_check(args: argparse.Namespace) -> int:
    """Execute the spectrum-check command."""
    import json

    from scramblesim.core.simulator import ScramblingSimulator

    if args.L is None or args.N is None:
        raise ValueError("spectrum-check needs --L and --N")

    config = _settings(args)
    report = ScramblingSimulator(config).spectrum_check(args.L, args.N, tol=args.tol)

    if args.json:
        print(json.dumps(report, indent=2))
    else:
        status = "PASS" if report["passed"] else "FAIL"
        print(f"\n{'='*50}")
        print(f"  Spectrum equivalence (L={args.L}, N={args.N})")
        print(f"{'='*50}")
        print(f"  Status:         {status}")
        print(f"  Dimension:      {report['dimension']}")
        print(f"  Max deviation:  {report['max_deviation']:.3e}")
        print(f"  Tolerance:      {report['tolerance']:.1e}")
        print(f"{'='*50}\n")

    return EXIT_OK if report["passed"] else EXIT_NUMERICAL


def cmd_hamming(args: argparse.Namespace) -> int:
    """Execute the hamming command."""
    from scramblesim.analysis.fits import fit_arctan
    from scramblesim.core.simulator import ScramblingSimulator
    from scramblesim.utils.io import write_csv, write_json, write_manifest

    experiment = _experiment(args)
    seed = experiment.require_seed()
    times = experiment.time_grid()
    engine = _engine_config(args, experiment)
    output = _output_path(experiment, "hamming")

    rows: List[Any] = []

    def record(state_index, diagnostics):
        rows.extend([state_index, d.time, d.D] for d in diagnostics)

    with _partial_on_failure(output, "hamming", rows):
        result = ScramblingSimulator(engine).hamming(
            experiment.L,
            experiment.N,
            times,
            M_s=experiment.M_s,
            seed=seed,
            initial_state=experiment.initial_state,
            n_initial_states=experiment.n_initial_states,
            on_state=record,
        )

    positive = times > 0
    fit = _try_fit(
        "arctan", fit_arctan, times[positive], result.D[positive], window=experiment.fit_window
    )
    manifest = _manifest("hamming", experiment, engine)

    if experiment.format == "json":
        write_json(output, {**result.to_dict(), "fit": fit})
        write_manifest(output, manifest)
    else:
        write_csv(
            output,
            ["t", "D_mean", "D_stderr"],
            zip(result.times, result.D, result.D_stderr),
        )
        fit_path = write_json(_sidecar(output, "fit.json"), fit)
        write_manifest(output, manifest)
        write_manifest(fit_path, manifest)

    print(f"Results saved to: {output}")
    if "params" in fit:
        print(f"  t_S = {fit['params']['t_S']:.6g}, D_inf = {fit['params']['D_inf']:.6g}")
    return EXIT_OK


def cmd_relax(args: argparse.Namespace) -> int:
    """Execute the relax command."""
    from scramblesim.analysis.fits import fit_diffusion_constant, fit_powerlaw
    from scramblesim.core.simulator import ScramblingSimulator
    from scramblesim.utils.io import write_csv, write_json, write_manifest

    experiment = _experiment(args)
    seed = experiment.require_seed()
    times = experiment.time_grid()
    engine = _engine_config(args, experiment)
    output = _output_path(experiment, "relax")

    rows: List[Any] = []

    def record(state_index, diagnostics):
        rows.extend([state_index, d.time, d.Z] for d in diagnostics)

    with _partial_on_failure(output, "relax", rows):
        result = ScramblingSimulator(engine).relax(
            experiment.L,
            experiment.N,
            times,
            M_s=experiment.M_s,
            seed=seed,
            initial_state=experiment.initial_state,
            n_initial_states=experiment.n_initial_states,
            on_state=record,
        )

    if result.Z is None:
        raise ValueError("Z(t) is undefined for N = 0")

    positive = times > 0
    fits = {
        "powerlaw": _try_fit(
            "powerlaw",
            fit_powerlaw,
            times[positive],
            1.0 - result.Z[positive],
            window=experiment.fit_window,
        ),
        "diffusion": _try_fit(
            "diffusion",
            fit_diffusion_constant,
            times[positive],
            result.mean_sqrt_n[positive],
            experiment.N,
            experiment.L,
            window=experiment.fit_window,
        ),
    }
    manifest = _manifest("relax", experiment, engine)

    if experiment.format == "json":
        data = result.to_dict()
        data["lambdas"] = result.lambdas.tolist()
        data["lambdas_infinity"] = result.lambdas_infinity.tolist()
        write_json(output, {**data, "fits": fits})
        write_manifest(output, manifest)
    else:
        t_inf = np.full(len(times), engine.t_infinity)
        write_csv(
            output,
            ["t", "Z", "Z_stderr", "one_minus_Z", "t_infinity"],
            zip(times, result.Z, result.Z_stderr, 1.0 - result.Z, t_inf),
        )
        lambdas_path = write_csv(
            _sidecar(output, "lambdas.csv"),
            ["t", "orbital", "lambda", "lambda_infinity"],
            (
                (t, l, result.lambdas[i, l], result.lambdas_infinity[l])
                for i, t in enumerate(times)
                for l in range(result.lambdas.shape[1])
            ),
        )
        fit_path = write_json(_sidecar(output, "fit.json"), fits)
        for path in (output, lambdas_path, fit_path):
            write_manifest(path, manifest)

    print(f"Results saved to: {output}")
    if "params" in fits["powerlaw"]:
        print(f"  1 - Z exponent = {fits['powerlaw']['params']['exponent']:.4f}")
    return EXIT_OK


def cmd_nk(args: argparse.Namespace) -> int:
    """Execute the nk command."""
    from scramblesim.core.simulator import ScramblingSimulator
    from scramblesim.utils.io import write_csv, write_json, write_manifest

    experiment = _experiment(args)
    seed = experiment.require_seed()
    engine = _engine_config(args, experiment)
    output = _output_path(experiment, "nk")

    with _partial_on_failure(output, "nk", []):
        result = ScramblingSimulator(engine).momentum(
            experiment.L, experiment.N, M_s=experiment.M_s, seed=seed
        )
    manifest = _manifest("nk", experiment, engine, initial_state="ground")

    if experiment.format == "json":
        write_json(output, result.to_dict())
        write_manifest(output, manifest)
    else:
        stderr = result.n_k_stderr if result.n_k_stderr is not None else np.zeros(len(result.k))
        write_csv(
            output,
            ["k", "n_k", "n_k_stderr", "S_k"],
            zip(result.k, result.n_k, stderr, result.S_k),
        )
        fit_path = write_json(_sidecar(output, "fit.json"), result.K_fit.to_dict())
        write_manifest(output, manifest)
        write_manifest(fit_path, manifest)

    print(f"Results saved to: {output}")
    print(f"  K = {result.K:.6g}")
    return EXIT_OK


def cmd_otoc(args: argparse.Namespace) -> int:
    """Execute the otoc command."""
    from scramblesim.analysis.fits import extract_butterfly_velocity, fit_lyapunov
    from scramblesim.core.simulator import ScramblingSimulator
    from scramblesim.exact.otoc import ENSEMBLE
    from scramblesim.utils.io import write_csv, write_json, write_manifest

    experiment = _experiment(args)
    times = experiment.time_grid()
    engine = _engine_config(args, experiment)
    output = _output_path(experiment, "otoc")
    source = experiment.source_site if experiment.source_site is not None else experiment.L // 2

    simulator = ScramblingSimulator(engine)
    with _partial_on_failure(output, "otoc", []):
        result = simulator.otoc(experiment.L, experiment.N, source, times, beta=experiment.beta)
        free = None
        if args.compare_free:
            free = simulator.otoc(
                experiment.L, experiment.N, source, times, beta=experiment.beta,
                constrained=False,
            )

    butterfly = _try_fit(
        "butterfly",
        extract_butterfly_velocity,
        times,
        result.values,
        result.sites,
        source,
        threshold=experiment.threshold,
    )
    fits = {"butterfly": butterfly}
    if "params" in butterfly:
        fits["lyapunov"] = _try_fit(
            "lyapunov",
            fit_lyapunov,
            times,
            result.values,
            result.sites,
            source,
            butterfly["params"]["v_B"],
            window=tuple(experiment.lyapunov_window),
        )
    manifest = _manifest(
        "otoc", experiment, engine, ensemble=ENSEMBLE, source_site=source
    )

    if experiment.format == "json":
        data = result.to_dict()
        if free is not None:
            data["free_values"] = free.values.tolist()
        write_json(output, {**data, "fits": fits})
        write_manifest(output, manifest)
    else:
        header = ["t", "j", "G"] + (["G_free"] if free is not None else [])
        rows = []
        for i, t in enumerate(times):
            for column, j in enumerate(result.sites):
                row = [t, j, result.values[i, column]]
                if free is not None:
                    row.append(free.values[i, column])
                rows.append(row)
        write_csv(output, header, rows)
        fit_path = write_json(_sidecar(output, "fit.json"), fits)
        write_manifest(output, manifest)
        write_manifest(fit_path, manifest)

    print(f"Results saved to: {output}")
    if "params" in butterfly:
        print(f"  v_B = {butterfly['params']['v_B']:.6g}")
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    """Execute the sample command."""
    from scramblesim.core.simulator import ScramblingSimulator
    from scramblesim.dynamics.slater import save_state
    from scramblesim.sampling.storage import save_batch
    from scramblesim.utils.io import write_manifest

    experiment = _experiment(args)
    seed = experiment.require_seed()
    engine = _engine_config(args, experiment)
    output = Path(experiment.output or f"samples_L{experiment.L}_N{experiment.N}.txt")

    simulator = ScramblingSimulator(engine)
    pipeline = simulator.pipeline(experiment.L, experiment.N)
    initial = simulator.initial_states(
        experiment.L, experiment.N, experiment.initial_state, 1, seed
    )[0]
    state = pipeline.evolve(initial, args.time)
    with _partial_on_failure(output, "sample", []):
        batch = pipeline.sample(state, experiment.M_s, seed, 0, 0)

    save_batch(batch, output)
    manifest = _manifest("sample", experiment, engine, time=args.time)
    write_manifest(output, manifest)
    if args.save_state:
        write_manifest(save_state(state, args.save_state), manifest)

    print(f"Saved {batch.M_s} samples to: {output}")
    return EXIT_OK


def cmd_info(args: argparse.Namespace) -> int:
    """Execute the info command."""
    import platform

    import scipy

    from scramblesim.config.defaults import SUPPORTED_SAMPLERS

    print(f"\nscramblesim v{__version__}")
    print("=" * 40)
    print(f"Python:        {platform.python_version()}")
    print(f"Platform:      {platform.system()} {platform.release()}")
    print(f"NumPy:         {np.__version__}")
    print(f"SciPy:         {scipy.__version__}")
    print(f"structlog:     {structlog.__version__}")
    print(f"\nSamplers:      {', '.join(SUPPORTED_SAMPLERS)}")
    print()
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    """Main entry point for the CLI."""
    from pydantic import ValidationError

    from scramblesim.exceptions.errors import ScrambleSimError
    from scramblesim.utils.logging import configure_logging

    parser = create_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return EXIT_OK

    commands = {
        "map": cmd_map,
        "spectrum-check": cmd_spectrum_check,
        "hamming": cmd_hamming,
        "relax": cmd_relax,
        "nk": cmd_nk,
        "otoc": cmd_otoc,
        "sample": cmd_sample,
        "info": cmd_info,
    }

    handler = commands.get(args.command)
    if handler is None:
        parser.print_help()
        return EXIT_USAGE

    try:
        settings = _settings(args)
        configure_logging(
            "DEBUG" if args.verbose else settings.log_level,
            args.log_format or settings.log_format,
        )
        return handler(args)
    except KeyboardInterrupt:
        print("\nOperation cancelled by user", file=sys.stderr)
        return EXIT_INTERRUPTED
    except ScrambleSimError as e:
        print(f"Error: {e.message}", file=sys.stderr)
        return e.exit_code
    except (ValueError, ValidationError, FileNotFoundError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        if args.verbose:
            import traceback

            traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
