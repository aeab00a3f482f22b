from types import SimpleNamespace

import pytest

from ngdsim.scenarios import builtin_config, list_scenarios, run_scenario


@pytest.fixture(scope="session")
def builtins(tmp_path_factory):
    """Run every built-in scenario once; shared by scenario and acceptance tests.

    Returns a namespace with ``results`` (name -> RunSummary) and ``root``
    (the directory holding each scenario's written outputs).
    """
    root = tmp_path_factory.mktemp("builtin_outputs")
    results = {}
    for name, _ in list_scenarios():
        results[name] = run_scenario(builtin_config(name), out_dir=root / name)
    return SimpleNamespace(results=results, root=root)
