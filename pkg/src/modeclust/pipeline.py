"""End-to-end orchestration: bandwidth, mode clustering, denoising, soft
assignment, connectivity and layout, with every artifact written to disk."""

import os
import platform
import shutil
import tempfile
import time
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
import scipy

from . import __version__, artifacts, bandwidth, connectivity, dataset, denoise, kde, layout, meanshift, softassign
from .errors import InvalidInput, ModeClusterError
from . import synth


class StageError(ModeClusterError):
    def __init__(self, stage, cause):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunConfig:
    input: Optional[str] = None
    label_column: Optional[str] = None
    drop_columns: tuple = ()
    standardize: bool = True
    h: Optional[float] = None
    n0: Optional[float] = None
    rho0: float = bandwidth.DEFAULT_RHO0
    omega0: Optional[float] = None
    output_dir: str = "modeclust-out"
    seed: Optional[int] = None
    synth: Optional[str] = None  # generate data instead of reading ``input``
    denoise: bool = True
    color_by: str = "cluster"

    def __post_init__(self):
        if (self.input is None) == (self.synth is None):
            raise InvalidInput("give exactly one of an input CSV or a synthetic generator")
        if self.synth is not None and self.seed is None:
            raise InvalidInput("synthetic data needs a seed")


@dataclass
class ClusteringResult:
    data: dataset.DataMatrix
    model: kde.DensityModel
    h: float
    n0: float
    raw_modes: meanshift.ModeSet
    raw_assign: meanshift.ClusterAssignment
    modes: meanshift.ModeSet
    assign: meanshift.ClusterAssignment
    report: Optional[denoise.DenoiseReport]


def load_data(cfg):
    if cfg.synth is not None:
        dm = synth.generate(cfg.synth, cfg.seed)
    else:
        dm = dataset.load_csv(cfg.input, cfg.label_column, cfg.drop_columns)
    return dataset.standardize(dm) if cfg.standardize else dm


def effective_h(dm, h=None):
    return h if h is not None else bandwidth.normal_reference_h(dm.n, dm.d, dm.mean_sd())


def cluster_data(dm, h=None, n0=None, do_denoise=True):
    h = effective_h(dm, h)
    n0 = n0 if n0 is not None else bandwidth.denoise_threshold(dm.n, dm.d)
    model = kde.DensityModel(dm.x, h)
    raw_modes, raw_assign = meanshift.cluster(model)
    modes, assign, report = raw_modes, raw_assign, None
    if do_denoise:
        modes, assign, report = denoise.denoise(model, raw_assign, n0, raw_modes)
    return ClusteringResult(dm, model, h, n0, raw_modes, raw_assign, modes, assign, report)


def clusters_doc(res, cfg):
    doc = {
        "h": res.h,
        "n0": res.n0,
        "standardize": cfg.standardize,
        "input": cfg.input,
        "synth": cfg.synth,
        "seed": cfg.seed,
        "label_column": cfg.label_column,
        "drop_columns": list(cfg.drop_columns),
        "k": res.modes.k,
        "modes": res.modes.modes,
        "labels": res.assign.labels,
        "sizes": res.assign.sizes,
        "pre_denoise_sizes": res.raw_assign.sizes,
        "unconverged": list(res.raw_assign.unconverged),
    }
    if res.report is not None:
        doc["denoise"] = {
            "rounds": res.report.rounds,
            "forced": res.report.forced,
            "removed_sizes": [list(r) for r in res.report.removed_sizes],
        }
    return doc


def _versions():
    return {
        "modeclust": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def run_pipeline(cfg):
    """Run every stage and write all artifacts into ``cfg.output_dir``.

    Files are staged in a temporary directory and moved into place only
    after every stage has succeeded, so a failed run leaves no partial
    output. Returns the manifest dictionary.
    """
    timings = {}
    stage = None

    def timed(name, fn, *args, **kwargs):
        nonlocal stage
        stage = name
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        timings[name] = time.perf_counter() - t0
        return out

    parent = os.path.dirname(os.path.abspath(cfg.output_dir))
    os.makedirs(parent, exist_ok=True)
    tmp = tempfile.mkdtemp(prefix=".modeclust-", dir=parent)
    try:
        dm = timed("load", load_data, cfg)
        h_rule = bandwidth.normal_reference_h(dm.n, dm.d, dm.mean_sd())
        n0_rule = bandwidth.denoise_threshold(dm.n, dm.d)
        res = timed("cluster", cluster_data, dm, cfg.h, cfg.n0, cfg.denoise)
        k = res.modes.k
        omega0 = cfg.omega0 if cfg.omega0 is not None else bandwidth.default_omega0(k)
        sa = timed("soft", softassign.soft_assign, res.model, res.modes)
        cm = timed("connect", connectivity.connectivity_matrix, sa, res.assign, omega0)
        lay = timed("layout", layout.two_stage_layout, res.modes, res.assign, cm, cfg.rho0, dm.x)

        stage = "write"
        sc = denoise.sc_plot(res.raw_assign, res.n0)
        doc = clusters_doc(res, cfg)
        path = lambda name: os.path.join(tmp, name)  # noqa: E731
        artifacts.write_json(path("labels.json"), {k_: doc[k_] for k_ in doc if k_ != "modes"})
        artifacts.write_json(path("modes.json"), {"k": k, "modes": res.modes.modes})
        artifacts.write_matrix_csv(path("soft.csv"), sa.a, artifacts.soft_header(k))
        artifacts.write_matrix_csv(path("omega.csv"), cm.omega, artifacts.soft_header(k))
        artifacts.write_json(path("edges.json"), artifacts.edges_to_json(cm.edges))
        artifacts.write_matrix_csv(path("scplot.csv"), np.array(sc.sorted_sizes)[:, None], ["size"], decimals=0)
        with open(path("scplot.svg"), "w", encoding="utf-8") as fh:
            fh.write(layout.scplot_svg(sc))
        color = dm.labels if cfg.color_by == "label" and dm.labels is not None else None
        with open(path("layout.svg"), "w", encoding="utf-8") as fh:
            fh.write(layout.layout_svg(lay, res.assign, color))
        artifacts.write_json(path("layout.json"), layout_doc(lay))

        manifest = {
            "parameters": {
                "h": res.h,
                "n0": res.n0,
                "rho0": cfg.rho0,
                "omega0": omega0,
                "standardize": cfg.standardize,
                "denoise": cfg.denoise,
            },
            # hex floats: the 9-digit JSON reals above cannot pin a bit-identical rerun
            "exact": {"h": float(res.h).hex(), "n0": float(res.n0).hex(), "rho0": float(cfg.rho0).hex(),
                      "omega0": float(omega0).hex()},
            "rules": {"h": h_rule, "n0": n0_rule, "omega0": bandwidth.default_omega0(k)},
            "config": asdict(cfg),
            "data": {"n": dm.n, "d": dm.d, "columns": list(dm.columns), "rejected_rows": list(dm.rejected_rows)},
            "result": {
                "k": k,
                "sizes": res.assign.sizes,
                "pre_denoise_k": res.raw_modes.k,
                "pre_denoise_sizes": res.raw_assign.sizes,
                "denoise_rounds": res.report.rounds if res.report else 0,
                "denoise_forced": res.report.forced if res.report else False,
                "edges": artifacts.edges_to_json(cm.edges),
            },
            "versions": _versions(),
            "timings_s": timings,
        }
        artifacts.write_json(path("manifest.json"), manifest)

        os.makedirs(cfg.output_dir, exist_ok=True)
        for name in os.listdir(tmp):
            shutil.move(os.path.join(tmp, name), os.path.join(cfg.output_dir, name))
        return manifest
    except ModeClusterError as exc:
        raise StageError(stage, exc) from exc
    except OSError as exc:
        from .errors import IoError

        raise StageError(stage, IoError(str(exc))) from exc
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def layout_doc(lay):
    return {
        "rho0": lay.rho0,
        "mode_xy": lay.mode_xy,
        "point_xy": lay.point_xy,
        "edges": artifacts.edges_to_json(lay.edges),
    }


def config_from_manifest(manifest, output_dir):
    """Rebuild a RunConfig that pins every effective parameter of a past run."""
    c = dict(manifest["config"])
    c["drop_columns"] = tuple(c.get("drop_columns") or ())
    exact = {key: float.fromhex(v) for key, v in manifest["exact"].items()}
    c.update(exact, output_dir=output_dir)
    return RunConfig(**c)
