import pytest

from halfstokes import report


def run_all_suites(out_dir):
    """Run every verification suite with the reference config and seed."""
    artifacts = {}
    for name in report.SUITE_NAMES:
        art = report.SUITE_RUNNERS[name](report.DEFAULTS,
                                         int(report.DEFAULTS["seed"]))
        report.write_artifact(art, str(out_dir))
        artifacts[name] = art
    report.write_summary(str(out_dir))
    return artifacts


@pytest.fixture(scope="session")
def artifact_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("artifacts")
    artifacts = run_all_suites(out)
    return out, artifacts


@pytest.fixture(scope="session")
def suites(artifact_dir):
    return artifact_dir[1]
