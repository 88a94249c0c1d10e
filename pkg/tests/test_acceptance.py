"""Checks against the published datasets.

Skipped unless GEOGRAPH_DATA_DIR points at a directory holding
``<name>/features.csv`` and ``<name>/labels.csv`` per dataset. The sweeps
below train ten seeds per grid point and take minutes to hours each.
"""

from pathlib import Path

import pytest

from geograph.core.config import settings
from geograph.domain.dataset import Dataset
from geograph.domain.graph import GraphMethod
from geograph.schemas.config import ExperimentConfig
from geograph.schemas.report import ExperimentReport
from geograph.services import data, experiment, graphs
from geograph.services.geometry import distance_matrix

pytestmark = pytest.mark.acceptance

GRID_SIZE = 15


def _data_root() -> Path:
    if settings.data_dir is None:
        pytest.skip("GEOGRAPH_DATA_DIR is not set")
    return Path(settings.data_dir)


def _dataset_section(name: str) -> dict:
    if name == "constructive":
        _data_root()
        return {"name": name, "constructive": {}}
    root = _data_root() / name
    if not (root / "features.csv").exists():
        pytest.skip(f"{name} dataset not found under {settings.data_dir}")
    return {"name": name, "features": str(root / "features.csv"), "labels": str(root / "labels.csv")}


def _dataset(name: str) -> Dataset:
    section = _dataset_section(name)
    return data.load_dataset(section["features"], section["labels"], name=name)


def _factory(name: str) -> graphs.GraphFactory:
    return graphs.GraphFactory.from_distances(distance_matrix(_dataset(name).features))


def _run(name: str, diagnostics: bool = False, sparsify: bool = False, mlp: bool = True) -> ExperimentReport:
    config = ExperimentConfig.from_mapping(
        {
            "dataset": _dataset_section(name),
            "methods": {"names": ["cknn"]},
            "sweep": {"grid_size": GRID_SIZE, "diagnostics": diagnostics},
            "sparsify": {"enabled": sparsify, "method": "cknn", "grid_size": GRID_SIZE},
            "baselines": {"mlp": mlp, "knnc": False},
        }
    )
    report, _ = experiment.run_experiment(config)
    return report


def _baseline(report: ExperimentReport, method: str):
    return next(b for b in report.baselines if b.method == method)


# ============================================================================
# DENSITY TESTS
# ============================================================================


def test_aminer_knn_density():
    """Test kNN at k=8 on AMiner."""
    g = _factory("aminer").build(GraphMethod.KNN, 8)
    assert graphs.edge_density(g) == pytest.approx(0.00748, abs=0.0005)


def test_aminer_cknn_density():
    """Test CkNN at k=199, delta=1 on AMiner."""
    g = _factory("aminer").build(GraphMethod.CKNN, 199)
    assert graphs.edge_density(g) == pytest.approx(0.03852, abs=0.001)


def test_cora_rmst_density():
    """Test RMST at gamma=0.02924 on Cora."""
    g = _factory("cora").build(GraphMethod.RMST, 0.02924)
    assert graphs.edge_density(g) == pytest.approx(0.01242, abs=0.001)


# ============================================================================
# ACCURACY TESTS
# ============================================================================


@pytest.mark.slow
@pytest.mark.parametrize(
    "name,mlp_acc,gcn_acc",
    [
        ("constructive", 0.421, 0.511),
        ("digits", 0.820, 0.934),
        ("segmentation", 0.720, 0.839),
    ],
)
def test_mlp_and_cknn_test_accuracy(name, mlp_acc, gcn_acc):
    """Test MLP and the CkNN optimum land within 3 points of the published test accuracy."""
    report = _run(name)
    assert _baseline(report, "mlp").test_acc_mean == pytest.approx(mlp_acc, abs=0.03)
    assert report.methods[0].optimum.test_acc_mean == pytest.approx(gcn_acc, abs=0.03)


# ============================================================================
# AMINER SWEEP TESTS
# ============================================================================


@pytest.fixture(scope="module")
def aminer_sweep() -> ExperimentReport:
    return _run("aminer", diagnostics=True)


@pytest.mark.slow
def test_aminer_cknn_sweep_peaks_at_moderate_density(aminer_sweep):
    """Test validation accuracy rises above MLP, peaks near density 0.039 and falls toward the complete graph."""
    records = aminer_sweep.methods[0].records
    peak = aminer_sweep.methods[0].optimum
    densest = max(records, key=lambda r: r.edge_density)
    assert peak.val_acc_mean > _baseline(aminer_sweep, "mlp").val_acc_mean
    assert peak.edge_density == pytest.approx(0.039, abs=0.015)
    assert densest.val_acc_mean <= peak.val_acc_mean - 0.10


@pytest.mark.slow
def test_aminer_alignment_tracks_accuracy(aminer_sweep):
    """Test alignment at the selected p* correlates with validation accuracy."""
    result = aminer_sweep.methods[0]
    assert result.p_star is not None
    assert result.alignment_correlation >= 0.9


@pytest.mark.slow
def test_aminer_class_separation_tracks_accuracy(aminer_sweep):
    """Test mean class separation of the output embedding correlates with validation accuracy."""
    assert aminer_sweep.methods[0].rcs_correlation >= 0.9


# ============================================================================
# SPARSIFICATION TESTS
# ============================================================================


@pytest.mark.slow
def test_cell_sparsification_lowers_degree_without_losing_accuracy():
    """Test the sparsified Cell graph has mean degree at most 8 and keeps test accuracy."""
    report = _run("cell", sparsify=True, mlp=False)
    result = report.sparsification[0]
    assert result.sparsified
    assert result.selected.mean_degree <= 8.0
    assert result.selected.test_acc_mean >= result.source.test_acc_mean - 0.005
