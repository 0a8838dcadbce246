# =============================================================================
# nfadlab
#
# COMMAND-LINE INTERFACE SUB-MODULE
# =============================================================================

"""
The `nfadlab` console script:

    nfadlab run --config PATH [--experiment NAME] [--output-dir DIR]
                [--seed N] [--preset NAME] [--efficiency X] [-v]
    nfadlab presets

Every run writes one CSV per result table and a `manifest.yaml` from which
the run can be repeated exactly.
"""

# Python stdlib imports
import argparse as _argparse
import os as _os
import sys as _sys
import typing as _typing

# External dependencies
import better_exceptions as _better_exceptions

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.config as _config
import nfadlab.util.custom_logging as _logging

from nfadlab import experiments as _experiments
from nfadlab import presets as _presets
from nfadlab.models.experiments import ExperimentConfig, ExperimentKind
from nfadlab.version import __version__

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

CSV_FLOAT_FORMAT = "%.9e"
MANIFEST_FILENAME = "manifest.yaml"

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

_verbosity = 0

# =============================================================================

def build_parser():
    # type: () -> _argparse.ArgumentParser
    parser = _argparse.ArgumentParser(
        prog="nfadlab",
        description="Simulate blinding attacks on NFAD single-photon detectors.")
    parser.add_argument(
        "--version", action="version", version="%(prog)s {}".format(__version__))
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run one experiment")
    run.add_argument(
        "--config", default=None,
        help="YAML configuration (default: {} or the usual locations)".format(
            _config.DEFAULT_CONFIG_ENV))
    run.add_argument(
        "--experiment", default=None,
        choices=[kind.value for kind in ExperimentKind])
    run.add_argument("--output-dir", default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--preset", default=None)
    run.add_argument("--efficiency", type=float, default=None)
    run.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="debug output; twice to mirror the structured log")

    sub.add_parser("presets", help="list the detector presets")
    return parser


def make_config(args):
    # type: (_argparse.Namespace) -> ExperimentConfig
    """
    Merges the configuration file with the command-line options. Without a
    file, `--experiment` alone is enough.
    """
    data = dict()
    if args.config is not None or args.experiment is None:
        data = _config.load_config(args.config)

    return ExperimentConfig.from_mapping(
        data,
        experiment=args.experiment,
        output_dir=args.output_dir,
        seed=args.seed,
        preset=args.preset,
        efficiency=args.efficiency)

# =============================================================================

def _prepare_directory(path):
    try:
        _os.makedirs(path, exist_ok=True)
    except (IOError, OSError) as exc:
        raise _errors.OutputError(path=path, reason=exc)


def write_artifacts(config, result):
    # type: (ExperimentConfig, _experiments.ExperimentResult) -> _typing.List[str]
    """
    Writes each table as `<name>.csv` and the manifest into the output
    directory; returns the written paths.
    """
    _prepare_directory(config.output_dir)

    paths = []
    for (name, table) in result.tables.items():
        path = _os.path.join(config.output_dir, "{}.csv".format(name))
        try:
            table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        except (IOError, OSError) as exc:
            raise _errors.OutputError(path=path, reason=exc)
        paths.append(path)

    manifest = config.to_mapping(settings=result.settings)
    manifest["nfadlab_version"] = __version__
    manifest["resolved_params"] = result.params.to_dict()
    manifest["artifacts"] = [_os.path.basename(path) for path in paths]

    paths.append(_config.write_manifest(
        _os.path.join(config.output_dir, MANIFEST_FILENAME), manifest))
    return paths


def _report_failure(exc):
    code = _errors.exit_code_for(exc)
    if isinstance(exc, _errors.NfadlabError):
        _logger.error(str(exc).strip())
    else:
        _logger.error("Unexpected {}: {}".format(type(exc).__name__, exc))
    if _verbosity > 0 or not isinstance(exc, _errors.NfadlabError):
        _logger.debug("".join(_better_exceptions.format_exception(
            type(exc), exc, exc.__traceback__)))
    return code


def run_experiment(config):
    # type: (ExperimentConfig) -> int
    """
    Runs the experiment of `config`, writes its artifacts and returns the
    process exit status (0 on success, the error's exit code otherwise).
    """
    with _logging.start_action(
            action_type="nfadlab:run_experiment",
            experiment=config.experiment.value) as action:
        try:
            result = _experiments.execute(config)
            paths = write_artifacts(config, result)
        except Exception as exc:
            code = _report_failure(exc)
            action.add_success_fields(exit_code=code)
            return code

        for line in result.summary:
            _logger.info(line)
        _logger.info("Wrote {}".format(", ".join(paths)))
        action.add_success_fields(exit_code=_errors.EXIT_SUCCESS, artifacts=paths)

    return _errors.EXIT_SUCCESS


def list_presets():
    # type: () -> _typing.List[str]
    lines = []
    for name in _presets.list_presets():
        device = _presets.DEVICES[name]
        lines.append("{}  {}  {:.0f} um  {} coupling  efficiencies: {}".format(
            name, device.model_number, device.diameter * 1e6, device.coupling,
            ", ".join("{:.0%}".format(eff) for eff in _presets.efficiencies(name))))
    lines.append("{}  default parameters, set through detector.overrides".format(
        _presets.CUSTOM))
    return lines

# =============================================================================

def main(argv=None):
    # type: (_typing.Optional[_typing.List[str]]) -> int
    global _verbosity

    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "presets":
        for line in list_presets():
            print(line)
        return _errors.EXIT_SUCCESS

    if args.command != "run":
        parser.print_help(_sys.stderr)
        return _errors.EXIT_USAGE

    _verbosity = args.verbose
    if _verbosity >= 1:
        _logging.set_console_level("DEBUG")
    if _verbosity >= 2:
        _logging.make_verbose()

    try:
        config = make_config(args)
    except Exception as exc:
        return _report_failure(exc)

    return run_experiment(config)


if __name__ == "__main__":
    _sys.exit(main())

# =============================================================================
