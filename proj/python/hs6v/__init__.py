"""Python bindings for the hs6v toolkit."""

import json
import os
import tempfile

from ._hs6v import (
    AccuracyError,
    ConfigurationError,
    DomainError,
    ResourceError,
    airy_ai,
    critical_data,
    exact_height_distribution,
    exact_length_cdf,
    length_cdf,
    limit_shape,
    run_cli,
    sample_heights,
    sample_schur,
    tracy_widom_fgue,
    tw_table,
    version,
)

__version__ = version()


def run(command, config, out, seed=None, workers=1, tol=None):
    """Run one CLI subcommand with `config` (a dict) and return the exit status."""
    fd, path = tempfile.mkstemp(suffix=".json")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(config, f)
        args = ["hs6v", command, "--config", path, "--out", str(out), "--workers", str(workers)]
        if seed is not None:
            args += ["--seed", str(seed)]
        if tol is not None:
            args += ["--tol", repr(tol)]
        return run_cli(args)
    finally:
        os.unlink(path)
