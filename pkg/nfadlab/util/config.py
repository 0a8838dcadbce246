# =============================================================================
# nfadlab
#
# CONFIG SUB-MODULE
# =============================================================================

# Python stdlib imports
import os as _os
import typing as _typing

# External dependencies
import yaml as _yaml
from yaml import load as _load_yaml
try:
    from yaml import CSafeLoader as _YamlLoader
except ImportError: # pragma: no cover
    from yaml import SafeLoader as _YamlLoader

# Local imports
import nfadlab.errors as _errors

from . import custom_logging as _logging

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

DEFAULT_CONFIG_ENV = "NFADLAB_CONFIG"
DEFAULT_CONFIG_PATHS = [
    "nfadlab-config.yaml",
    ".nfadlab-config.yaml",
    "~/nfadlab-config.yaml",
    "~/.nfadlab-config.yaml",
]

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def find_config_file(search_paths=None):
    # type: (_typing.List[str]) -> _typing.Optional[str]
    """
    Searches through the provided `search_paths` for the first existing file
    that is found. Typical names for the configuration file include:
    `nfadlab-config.yaml` and `.nfadlab-config.yaml` in the working directory.

    :param search_paths: The search paths. If not provided, the function will
        use the `DEFAULT_CONFIG_PATHS` constant.

    :return: The path of a configuration file if one is found; `None` otherwise
    """

    location = None

    # By default, use DEFAULT_CONFIG_PATHS
    if search_paths is None:
        search_paths = DEFAULT_CONFIG_PATHS

    _logger.debug(
        "Search for configuration file among: {}".format(search_paths))

    for config_path in search_paths:

        # Expand home directory ~ and make path absolute if relative
        config_path = _os.path.abspath(_os.path.expanduser(config_path))

        # Check whether there is a file at that location
        if _os.path.exists(config_path) and _os.path.isfile(config_path):

            location = config_path
            _logger.debug("Configuration found: {}".format(config_path))
            break

        else:
            _logger.debug("No config file here: {}".format(config_path))

    return location


def config_search_paths(path=None):
    # type: (_typing.Optional[str]) -> _typing.List[str]
    """
    Returns the configuration search order: the explicit `path`, then the
    `NFADLAB_CONFIG` environment variable, then `DEFAULT_CONFIG_PATHS`.

    An explicit path is authoritative, and is the only candidate.
    """
    if path:
        return [path]

    search_paths = []
    if _os.environ.get(DEFAULT_CONFIG_ENV):
        search_paths.append(_os.environ.get(DEFAULT_CONFIG_ENV))
    search_paths.extend(DEFAULT_CONFIG_PATHS)
    return search_paths


def read_config_file(search_paths=None):
    # type: (_typing.List[str]) -> _typing.Optional[dict]
    """
    Loads and returns a configuration file if one can be found; `None`
    otherwise.

    :param search_paths: The search paths. If not provided, the function will
        use the `DEFAULT_CONFIG_PATHS` constant.

    :return: A dictionary containing the configuration settings, if a
        configuration has been found; `None` otherwise.

    :raises ConfigError: If the file found is not a valid YAML mapping.
    """
    config_path = find_config_file(search_paths=search_paths)

    if config_path is None:
        return None

    try:
        with open(config_path) as config_file:
            config = _load_yaml(config_file, Loader=_YamlLoader)
    except _yaml.YAMLError as exc:
        _logger.debug(
            "Error reading configuration file: {}".format(config_path))
        raise _errors.ConfigError(
            reason="'{}' is not valid YAML ({}).".format(
                config_path, str(exc).splitlines()[0]))
    except (IOError, OSError) as exc:
        raise _errors.ConfigError(
            reason="'{}' cannot be read ({}).".format(config_path, exc))

    if config is None:
        config = dict()

    if not isinstance(config, dict):
        raise _errors.ConfigError(
            reason="'{}' must contain a mapping of sections.".format(
                config_path))

    return config


def load_config(path=None):
    # type: (_typing.Optional[str]) -> dict
    """
    Loads the experiment configuration, following `config_search_paths`.

    :raises ConfigError: If an explicit `path` does not exist, or if no
        configuration can be found at all.
    """
    search_paths = config_search_paths(path=path)
    config = read_config_file(search_paths=search_paths)

    if config is None:
        raise _errors.ConfigError(
            reason="No configuration file found (searched: {}).".format(
                ", ".join(search_paths)))

    return config

# =============================================================================

def write_manifest(path, data):
    # type: (str, dict) -> str
    """
    Writes a fully resolved configuration as YAML, with sorted keys, so that
    identical runs produce identical manifests.
    """
    try:
        with open(path, "w") as manifest_file:
            _yaml.safe_dump(
                data,
                manifest_file,
                default_flow_style=False,
                sort_keys=True)
    except (IOError, OSError) as exc:
        raise _errors.OutputError(path=path, reason=exc)

    _logger.debug("Manifest written: {}".format(path))
    return path

# =============================================================================
